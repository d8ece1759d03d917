#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "subcell/grid.hpp"
#include "subcell/models.hpp"
#include "subcell/orient.hpp"

namespace subcell {

enum class Norm { L1, L2 };

/// Weighted data-fitting loss: weight K on the anchor cell, 1 elsewhere.
/// K = 100 reproduces the area-consistency-weighted variants.
struct LossConfig {
    Norm norm = Norm::L2;
    double K = 1.0;
};

/// Row-major index of the anchor cell inside the stencil window.
inline int anchor_index_in_window(const Stencil& st) {
    const Stencil::GridRange r = st.grid_range();
    return (st.anchor.j - r.j0) * (r.i1 - r.i0 + 1) + (st.anchor.i - r.i0);
}

/// Grid averages over the stencil window, row-major, with periodic wrap.
inline std::vector<double> window_averages(const CellGrid& g, const Stencil& st) {
    const Stencil::GridRange r = st.grid_range();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(st.width()) * st.height());
    for (int j = r.j0; j <= r.j1; ++j)
        for (int i = r.i0; i <= r.i1; ++i) out.push_back(g.at(i, j));
    return out;
}

inline double loss(const std::vector<double>& target, const InterfaceModel& m, const Stencil& st, double h,
                   const LossConfig& cfg) {
    const std::vector<double> pred = stencil_averages(m, st, h);
    if (pred.size() != target.size()) throw std::invalid_argument("loss: target length != stencil cell count");
    const int anchor = anchor_index_in_window(st);
    double total = 0.0;
    for (std::size_t idx = 0; idx < target.size(); ++idx) {
        const double d = std::abs(target[idx] - pred[idx]);
        const double w = (static_cast<int>(idx) == anchor) ? cfg.K : 1.0;
        total += w * (cfg.norm == Norm::L2 ? d * d : d);
    }
    return total;
}

inline double loss_on_grid(const CellGrid& g, const InterfaceModel& m, const Stencil& st, const LossConfig& cfg) {
    return loss(window_averages(g, st), m, st, g.h(), cfg);
}

/// Centered fixed 3x3 stencil used by the OBERA variants and ELVIRA.
inline Stencil centered_stencil(CellIndex cell, Orientation orient = Orientation::YLeq) {
    return Stencil{cell, 1, 1, 1, 1, orient};
}

// ---------------------------------------------------------------------------
// Deterministic Nelder-Mead simplex search (reflect/expand/contract/shrink
// with the classical coefficients 1, 2, 1/2, 1/2).
// ---------------------------------------------------------------------------

struct SimplexResult {
    std::vector<double> x;
    double f = 0.0;
    bool converged = false;
    int iterations = 0;
};

inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 const std::vector<double>& x0, const std::vector<double>& steps, double tol,
                                 int max_iter) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> xs(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += steps[i];
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        std::vector<std::vector<double>> nxs(n + 1);
        std::vector<double> nfs(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            nxs[i] = xs[idx[i]];
            nfs[i] = fs[idx[i]];
        }
        xs = std::move(nxs);
        fs = std::move(nfs);
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t c = 0; c < n; ++c) d = std::max(d, std::abs(xs[i][c] - xs[0][c]));
        return d;
    };

    int it = 0;
    for (; it < max_iter; ++it) {
        order();
        if (diameter() < tol) return {xs[0], fs[0], true, it};
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < n; ++c) centroid[c] += xs[i][c] / static_cast<double>(n);
        auto combine = [&](double coef) {
            std::vector<double> z(n);
            for (std::size_t c = 0; c < n; ++c) z[c] = centroid[c] + coef * (centroid[c] - xs[n][c]);
            return z;
        };
        const std::vector<double> xr = combine(1.0);
        const double fr = f(xr);
        if (fr < fs[0]) {
            const std::vector<double> xe = combine(2.0);
            const double fe = f(xe);
            if (fe < fr) {
                xs[n] = xe;
                fs[n] = fe;
            } else {
                xs[n] = xr;
                fs[n] = fr;
            }
        } else if (fr < fs[n - 1]) {
            xs[n] = xr;
            fs[n] = fr;
        } else {
            const bool outside = fr < fs[n];
            const std::vector<double> xc = combine(outside ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fs[n])) {
                xs[n] = xc;
                fs[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t c = 0; c < n; ++c) xs[i][c] = xs[0][c] + 0.5 * (xs[i][c] - xs[0][c]);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }
    order();
    return {xs[0], fs[0], false, it};
}

// ---------------------------------------------------------------------------
// Line offset solve: offset r such that the half-plane with normal angle theta
// reproduces a prescribed average on the cell. Monotone bisection plus Newton.
// ---------------------------------------------------------------------------

inline double solve_line_offset(double theta, const Box& cell, double target) {
    const double rho = line_offset_limit(theta, cell);
    const Vec2 e = normal_of_angle(theta);
    const Vec2 zc = cell.center();
    auto frac = [&](double r) { return halfplane_box_area(zc + e * r, e, cell) / cell.area(); };
    double lo = -rho, hi = rho;
    if (target <= 0.0) return lo;
    if (target >= 1.0) return hi;
    for (int it = 0; it < 80 && (hi - lo) > 1e-17 * (1.0 + rho); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (frac(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// OBERA: derivative-free minimization over a family's parameters
// ---------------------------------------------------------------------------

enum class Family { Linear, Quadratic, Circle };
enum class FitInit { SobelAngle, ElviraBest };

struct FitConfig {
    Family family = Family::Linear;
    LossConfig loss{Norm::L2, 1.0};
    double tol = 1e-10;
    int max_iter = 600;
    FitInit init = FitInit::SobelAngle;
};

struct FitResult {
    InterfaceModel model;
    Stencil stencil;
    double loss = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Map a polynomial fitted in the canonical oriented frame (inside at small t)
/// to the world-facing model convention for each orientation.
inline OrientedPolyModel model_from_frame_poly(Orientation orient, Vec2 anchor, double h, const Polynomial& p_frame) {
    const bool negate = (orient == Orientation::YGeq || orient == Orientation::XGeq);
    Polynomial p = p_frame;
    if (negate)
        for (double& c : p.c) c = -c;
    return OrientedPolyModel{orient, anchor, h, p};
}

/// Sobel-based initial angle: the outward normal points against the gradient.
inline double sobel_angle(const NumericalGradient& g) { return wrap_angle(std::atan2(g.H, -g.V)); }

namespace detail {

inline double restriction_penalty(double violation) { return 1e6 * (1.0 + violation) * (1.0 + violation); }

}  // namespace detail

inline FitResult obera_fit(const CellGrid& g, CellIndex cell, const FitConfig& cfg) {
    const double h = g.h();
    const Stencil st = centered_stencil(cell);
    const std::vector<double> target = window_averages(g, st);
    const Box anchor_box = g.cell_box(cell.i, cell.j);
    const Box window = st.window_box(h);
    const Vec2 zc = anchor_box.center();
    const NumericalGradient grad = sobel(g, cell.i, cell.j);
    const double a_anchor = g.at(cell.i, cell.j);

    auto run = [&](auto&& to_model, const std::vector<double>& x0, const std::vector<double>& steps) {
        auto objective = [&](const std::vector<double>& x) {
            const auto [model, violation] = to_model(x);
            if (violation > 0.0) return detail::restriction_penalty(violation);
            return loss(target, model, st, h, cfg.loss);
        };
        const SimplexResult r = nelder_mead(objective, x0, steps, cfg.tol, cfg.max_iter);
        const auto [model, violation] = to_model(r.x);
        (void)violation;
        return FitResult{model, st, loss(target, model, st, h, cfg.loss), r.converged, r.iterations};
    };

    if (cfg.family == Family::Linear) {
        auto to_model = [&](const std::vector<double>& x) {
            const double theta = x[0];
            const double r = x[1] * h;
            const double rho = line_offset_limit(theta, anchor_box);
            const double violation = std::max(0.0, (std::abs(r) - rho) / h);
            return std::make_pair(InterfaceModel{LinearModel{wrap_angle(theta), r, zc}}, violation);
        };
        const double theta0 = sobel_angle(grad);
        const double r0 = solve_line_offset(theta0, anchor_box, a_anchor);
        return run(to_model, {theta0, r0 / h}, {0.1, 0.1});
    }

    if (cfg.family == Family::Quadratic) {
        const Orientation orient = select_orientation(grad);
        auto to_model = [&](const std::vector<double>& x) {
            const Polynomial p_frame{{x[0], x[1], x[2]}};
            const InterfaceModel m{model_from_frame_poly(orient, zc, h, p_frame)};
            // keep the graph confined in the stencil along the value axis
            const double s_half = st.k_minus + 0.5;  // symmetric 3x3 window
            const auto [lo, hi] = detail::poly_range(p_frame, -s_half, s_half);
            const double t_lo = st.hat_base();
            const double t_hi = st.hat_base() + st.height();
            const double violation = std::max({0.0, t_lo - lo, hi - t_hi});
            return std::make_pair(m, violation);
        };
        // initial frame polynomial: anchor-average offset, Sobel slope, flat
        const OrientedFrame f{orient};
        const Vec2 nf_world{-grad.H, -grad.V};  // outward normal direction, unnormalized
        // frame components of the outward normal
        const Vec2 es = f.world_vec(1.0, 0.0);
        const Vec2 et = f.world_vec(0.0, 1.0);
        const double ns = dot(nf_world, es);
        const double nt = dot(nf_world, et);
        double slope = (std::abs(nt) > 1e-12) ? -ns / nt : 0.0;
        slope = std::clamp(slope, -2.0, 2.0);
        return run(to_model, {a_anchor - 0.5, slope, 0.0}, {0.1, 0.1, 0.1});
    }

    // Circle family: center restricted outside the stencil support
    auto to_model = [&](const std::vector<double>& x) {
        const Vec2 center{x[0], x[1]};
        const double radius = std::abs(x[2]);
        double violation = 0.0;
        if (window.contains(center)) {
            const double dx = std::min(center.x - window.x0, window.x1 - center.x);
            const double dy = std::min(center.y - window.y0, window.y1 - center.y);
            violation = std::min(dx, dy) / h + 0.1;
        }
        if (radius < 0.5 * h) violation = std::max(violation, (0.5 * h - radius) / h);
        return std::make_pair(InterfaceModel{CircleModel{center, radius, true}}, violation);
    };
    const double theta0 = sobel_angle(grad);
    const Vec2 e = normal_of_angle(theta0);
    const double R0 = 2.5 * h;
    const Vec2 c0 = zc - e * R0;
    return run(to_model, {c0.x, c0.y, R0}, {0.5 * h, 0.5 * h, 0.5 * h});
}

/// LVIRA: linear family, centered 3x3 stencil, plain l2 loss.
inline FitResult lvira(const CellGrid& g, CellIndex cell) {
    FitConfig cfg;
    cfg.family = Family::Linear;
    cfg.loss = LossConfig{Norm::L2, 1.0};
    return obera_fit(g, cell, cfg);
}

}  // namespace subcell
