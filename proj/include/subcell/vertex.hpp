#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "subcell/aeros.hpp"
#include "subcell/elvira.hpp"
#include "subcell/grid.hpp"
#include "subcell/models.hpp"
#include "subcell/obera.hpp"
#include "subcell/orient.hpp"
#include "subcell/recon.hpp"

namespace subcell {

struct ScoredCorner {
    CornerModel model;
    double loss = 0.0;
};

namespace detail {

inline double angle_of_normal(const Vec2& n) { return wrap_angle(std::atan2(-n.x, n.y)); }

// Corner model from a piecewise-linear graph in the oriented frame:
// left slope m1 on tau <= ts, right slope m2 on tau >= ts, heights in
// anchor-centered hat units. Kink direction decides meet vs join.
inline CornerModel corner_from_frame(Orientation orient, const Vec2& anchor_center, double h, double sig_star,
                                     double t_star_hat, double m1, double m2) {
    const OrientedFrame f{orient};
    const Vec2 apex = anchor_center + f.world_vec(sig_star, t_star_hat) * h;
    auto normal_world = [&](double m) {
        const double inv = 1.0 / std::hypot(m, 1.0);
        return f.world_vec(-m * inv, inv);
    };
    const Vec2 n1 = normal_world(m1);
    const Vec2 n2 = normal_world(m2);
    const bool join = m1 < m2;  // w = max of the two lines; inside is the union of subgraphs
    return CornerModel{apex, angle_of_normal(n1), angle_of_normal(n2), join};
}

struct FramePwl {
    double alpha, m1, beta, m2, t_star;  // window coordinates tau in [0,4]
};

inline double pwl_eval(const FramePwl& w, double tau) {
    return tau <= w.t_star ? w.alpha + w.m1 * tau : w.beta + w.m2 * tau;
}

// closed-form candidates for the breakpoint-column hypothesis; c is 1 or 2
inline void solve_breakpoint_column(const std::array<double, 4>& A, int c, std::vector<FramePwl>& out) {
    constexpr double kParallel = 1e-11;
    if (c == 1) {
        const double m2 = A[3] - A[2];
        const double beta = A[2] - 2.5 * m2;
        const double P = A[0] - beta - m2;
        const double R = beta + 1.5 * m2 - A[1];
        // (P + s/2)^2 = 2 (s - m2) R, quadratic in the left slope s
        const double b = 4.0 * (P - 2.0 * R);
        const double cc = 4.0 * P * P + 8.0 * m2 * R;
        const double disc = b * b - 4.0 * cc;
        if (disc < 0.0) return;
        const double sq = std::sqrt(disc);
        for (double s : {0.5 * (-b - sq), 0.5 * (-b + sq)}) {
            const double alpha = A[0] - 0.5 * s;
            if (std::abs(s - m2) < kParallel) {
                out.push_back({alpha, s, beta, m2, c + 0.5});
            } else {
                out.push_back({alpha, s, beta, m2, (beta - alpha) / (s - m2)});
            }
        }
    } else {
        const double m1 = A[1] - A[0];
        const double alpha = A[0] - 0.5 * m1;
        const double P = alpha + 3.0 * m1 - A[3];
        const double R = alpha + 2.5 * m1 - A[2];
        // (P + u/2)^2 = 2 (m1 - u) R, quadratic in the right slope u
        const double b = 4.0 * (P + 2.0 * R);
        const double cc = 4.0 * P * P - 8.0 * m1 * R;
        const double disc = b * b - 4.0 * cc;
        if (disc < 0.0) return;
        const double sq = std::sqrt(disc);
        for (double u : {0.5 * (-b - sq), 0.5 * (-b + sq)}) {
            const double beta = A[3] - 3.5 * u;
            if (std::abs(m1 - u) < kParallel) {
                out.push_back({alpha, m1, beta, u, c + 0.5});
            } else {
                out.push_back({alpha, m1, beta, u, (beta - alpha) / (m1 - u)});
            }
        }
    }
}

}  // namespace detail

/// AEROS-Vertex: oriented piecewise-linear recovery with one breakpoint from
/// 4-column stencils. Every horizontal placement of the window is tried; per
/// placement the two interior columns are hypothesized to hold the breakpoint
/// and the four column-average equations are solved in closed form. Admissible
/// candidates (breakpoint in the anchor cell or an immediate neighbour, graph
/// confined in the window) are returned with their common-stencil losses.
inline std::vector<ScoredCorner> aeros_vertex_fit(const CellGrid& g, CellIndex cell,
                                                  const LossConfig& cfg = LossConfig{Norm::L2, 100.0},
                                                  double eps = kSingularEps) {
    std::vector<ScoredCorner> out;
    const Orientation orient = select_orientation(sobel(g, cell.i, cell.j));
    const OrientedFrame f{orient};
    const auto [s0, t0] = f.st_of(cell.i, cell.j);
    const int cap = stencil_cap(2);
    const int max_height = g.l() - 2;
    const Stencil common = centered_stencil(cell);
    const std::vector<double> target = window_averages(g, common);
    const Vec2 zc = g.cell_center(cell.i, cell.j);
    const double h = g.h();

    for (int p = 0; p < 4; ++p) {
        const int lo = s0 - p;
        const int hi = lo + 3;
        int lminus = -1, lplus = -1;
        for (int l = 1; l <= cap; ++l)
            if (detail::clean_row(g, f, lo, hi, t0 - l - 1, true, eps)) {
                lminus = l;
                break;
            }
        if (lminus < 0) continue;
        for (int l = 1; l <= cap; ++l)
            if (detail::clean_row(g, f, lo, hi, t0 + l + 1, false, eps)) {
                lplus = l;
                break;
            }
        if (lplus < 0) continue;
        const int height = 1 + lminus + lplus;
        if (height > max_height) continue;

        std::array<double, 4> A{};
        for (int cidx = 0; cidx < 4; ++cidx) {
            double sum = 0.0;
            for (int t = t0 - lminus; t <= t0 + lplus; ++t) {
                const CellIndex cc = f.cell_of(lo + cidx, t);
                sum += g.at(cc.i, cc.j);
            }
            A[static_cast<std::size_t>(cidx)] = sum;
        }

        std::vector<detail::FramePwl> sols;
        for (int c : {1, 2}) {
            if (std::abs(c - p) > 1) continue;  // breakpoint must be in T or an immediate neighbour
            detail::solve_breakpoint_column(A, c, sols);
            for (const auto& w : sols) {
                if (!(w.t_star >= c - 1e-9 && w.t_star <= c + 1.0 + 1e-9)) continue;
                const double slack = 1e-9;
                const double y_star = detail::pwl_eval(w, w.t_star);
                bool confined = y_star >= -slack && y_star <= height + slack;
                for (double tau : {0.0, 4.0})
                    confined = confined && detail::pwl_eval(w, tau) >= -slack &&
                               detail::pwl_eval(w, tau) <= height + slack;
                if (!confined) continue;
                const double sig_star = w.t_star - (p + 0.5);
                const double t_star_hat = y_star - (lminus + 0.5);
                const CornerModel corner =
                    detail::corner_from_frame(orient, zc, h, sig_star, t_star_hat, w.m1, w.m2);
                const double l = loss(target, InterfaceModel{corner}, common, h, cfg);
                out.push_back({corner, l});
            }
            sols.clear();
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// TEM: tangent extension from the two nearest chain neighbours whose stencils
// exclude the cell of interest
// ---------------------------------------------------------------------------

namespace detail {

struct TangentLine {
    Vec2 point;
    Vec2 normal;  // outward (towards {v=0})
};

inline std::optional<TangentLine> tangent_at(const InterfaceModel& m, const Vec2& z) {
    if (const auto* lm = std::get_if<LinearModel>(&m)) {
        const Vec2 n = lm->normal();
        const Vec2 p0 = lm->point_on_line();
        const double d = dot(z - p0, n);
        return TangentLine{z - n * d, n};
    }
    if (const auto* cm = std::get_if<CircleModel>(&m)) {
        const Vec2 d = z - cm->center;
        const double len = norm(d);
        if (len < 1e-300) return std::nullopt;
        const Vec2 radial = d * (1.0 / len);
        return TangentLine{cm->center + radial * cm->radius, cm->inside ? radial : radial * -1.0};
    }
    if (const auto* pm = std::get_if<OrientedPolyModel>(&m)) {
        const bool vertical = is_vertical_graph(pm->orient);
        const double u = ((vertical ? z.x : z.y) - (vertical ? pm->anchor.x : pm->anchor.y)) / pm->h;
        const double v = pm->p.eval(u);
        const double dv = pm->p.derivative().eval(u);
        const Vec2 point = vertical ? Vec2{z.x, pm->anchor.y + pm->h * v} : Vec2{pm->anchor.x + pm->h * v, z.y};
        const double inv = 1.0 / std::hypot(dv, 1.0);
        Vec2 n;
        switch (pm->orient) {
            case Orientation::YLeq: n = {-dv * inv, inv}; break;
            case Orientation::YGeq: n = {dv * inv, -inv}; break;
            case Orientation::XLeq: n = {inv, -dv * inv}; break;
            default: n = {-inv, dv * inv}; break;
        }
        return TangentLine{point, n};
    }
    return std::nullopt;
}

inline int chebyshev_periodic(CellIndex a, CellIndex b, int l) {
    auto d1 = [l](int u, int v) {
        int d = std::abs(u - v) % l;
        return std::min(d, l - d);
    };
    return std::max(d1(a.i, b.i), d1(a.j, b.j));
}

}  // namespace detail

/// Tangent Extension Method. Requires a base reconstruction holding a fitted
/// model for every singular cell. Walks the singular chain away from `cell` in
/// both directions (radius 5) until reaching cells whose fitted stencils
/// exclude `cell`, Taylor-expands their interfaces at the midpoints, and
/// intersects the resulting half-planes into a corner candidate.
inline std::optional<ScoredCorner> tem_fit(const CellGrid& g, CellIndex cell, const Reconstruction& base,
                                           const LossConfig& cfg = LossConfig{Norm::L2, 100.0}) {
    constexpr int kRadius = 5;
    const int l = g.l();
    const Stencil common = centered_stencil(cell);
    const std::vector<double> target = window_averages(g, common);

    auto singular_at = [&](CellIndex c) { return base.fit_at(c.i, c.j) != nullptr; };

    // deterministic neighbour order
    static constexpr std::array<std::pair<int, int>, 8> kNeigh{
        {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};

    std::set<long> visited;
    visited.insert(base.key(cell.i, cell.j));

    auto qualify = [&](CellIndex c) -> const CellFit* {
        const CellFit* f = base.fit_at(c.i, c.j);
        if (!f) return nullptr;
        if (f->stencil.contains_cell(cell.i, cell.j, l)) return nullptr;
        const bool smooth = std::holds_alternative<LinearModel>(f->model) ||
                            std::holds_alternative<CircleModel>(f->model) ||
                            std::holds_alternative<OrientedPolyModel>(f->model);
        return smooth ? f : nullptr;
    };

    std::vector<const CellFit*> picks;
    for (const auto& [di, dj] : kNeigh) {
        if (picks.size() >= 2) break;
        CellIndex cur{g.wrap(cell.i + di), g.wrap(cell.j + dj)};
        if (!singular_at(cur) || visited.count(base.key(cur.i, cur.j))) continue;
        // walk one arm
        while (detail::chebyshev_periodic(cur, cell, l) <= kRadius) {
            visited.insert(base.key(cur.i, cur.j));
            if (const CellFit* f = qualify(cur)) {
                picks.push_back(f);
                break;
            }
            bool stepped = false;
            int best_gain = -1;
            CellIndex next{};
            for (const auto& [ei, ej] : kNeigh) {
                CellIndex cand{g.wrap(cur.i + ei), g.wrap(cur.j + ej)};
                if (!singular_at(cand) || visited.count(base.key(cand.i, cand.j))) continue;
                const int gain = detail::chebyshev_periodic(cand, cell, l);
                if (gain > best_gain) {
                    best_gain = gain;
                    next = cand;
                    stepped = true;
                }
            }
            if (!stepped) break;
            cur = next;
        }
    }
    if (picks.size() < 2) return std::nullopt;

    const Vec2 zt = g.cell_center(cell.i, cell.j);
    std::array<detail::TangentLine, 2> lines;
    for (int idx = 0; idx < 2; ++idx) {
        const CellFit* f = picks[static_cast<std::size_t>(idx)];
        // periodic-aware midpoint: shift the neighbour's center to the nearest image
        Vec2 zn = g.cell_center(f->cell.i, f->cell.j);
        if (zn.x - zt.x > 0.5) zn.x -= 1.0;
        if (zt.x - zn.x > 0.5) zn.x += 1.0;
        if (zn.y - zt.y > 0.5) zn.y -= 1.0;
        if (zt.y - zn.y > 0.5) zn.y += 1.0;
        const Vec2 mid = (zt + zn) * 0.5;
        InterfaceModel shifted = f->model;
        // translate the model to the same periodic image as the midpoint
        const Vec2 image_shift = zn - g.cell_center(f->cell.i, f->cell.j);
        if (std::abs(image_shift.x) > 1e-12 || std::abs(image_shift.y) > 1e-12)
            shifted = model_translate(shifted, image_shift);
        const auto tl = detail::tangent_at(shifted, mid);
        if (!tl) return std::nullopt;
        lines[static_cast<std::size_t>(idx)] = *tl;
    }

    // apex: intersection of the two tangent lines
    const double det = cross(lines[0].normal, lines[1].normal);
    if (std::abs(det) < 1e-10) return std::nullopt;
    const double c1 = dot(lines[0].normal, lines[0].point);
    const double c2 = dot(lines[1].normal, lines[1].point);
    const Vec2 apex{(c1 * lines[1].normal.y - c2 * lines[0].normal.y) / det,
                    (lines[0].normal.x * c2 - lines[1].normal.x * c1) / det};
    const Box window = common.window_box(g.h());
    const Box padded{window.x0 - 0.5 * g.h(), window.y0 - 0.5 * g.h(), window.x1 + 0.5 * g.h(),
                     window.y1 + 0.5 * g.h()};
    if (!padded.contains(apex)) return std::nullopt;

    const double t1 = detail::angle_of_normal(lines[0].normal);
    const double t2 = detail::angle_of_normal(lines[1].normal);
    ScoredCorner best;
    bool have = false;
    for (bool join : {false, true}) {
        const CornerModel corner{apex, t1, t2, join};
        const double lval = loss(target, InterfaceModel{corner}, common, g.h(), cfg);
        if (!have || lval < best.loss) {
            best = {corner, lval};
            have = true;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Loss-based aggregation of competing methods
// ---------------------------------------------------------------------------

struct Aggregated {
    InterfaceModel model = ConstantModel{0.0};
    Stencil stencil;
    std::string method = "piecewise-constant";
    double loss = std::numeric_limits<double>::infinity();
    bool fell_back = false;
};

/// Run each named base method on the cell (skipping those that fail) and keep
/// the minimal common-stencil loss; ties resolve to the earlier method.
/// Supported names: elvira, elvira-w-oriented, quadratic-aero, quartic-aero,
/// linear-obera, linear-obera-w, quadratic-obera-non-adaptive.
inline Aggregated aggregate(const CellGrid& g, CellIndex cell, const std::vector<std::string>& methods,
                            const LossConfig& cfg) {
    if (methods.empty()) throw std::invalid_argument("aggregate: method list is empty");
    const Stencil common = centered_stencil(cell);
    const std::vector<double> target = window_averages(g, common);
    Aggregated best;

    auto consider = [&](const InterfaceModel& m, const Stencil& st, const std::string& tag) {
        const double lval = loss(target, m, common, g.h(), cfg);
        if (lval < best.loss) {
            best.model = m;
            best.stencil = st;
            best.method = tag;
            best.loss = lval;
            best.fell_back = false;
        }
    };

    for (const std::string& name : methods) {
        if (name == "elvira") {
            const ElviraSelection s = elvira_fit(g, cell);
            consider(InterfaceModel{s.model}, centered_stencil(cell), name);
        } else if (name == "elvira-w-oriented") {
            const ElviraSelection s = elvira_wo_fit(g, cell);
            consider(InterfaceModel{s.model}, centered_stencil(cell), name);
        } else if (name == "quadratic-aero") {
            if (const auto r = aeros_fit(g, cell, 1)) consider(r->model, r->stencil, name);
        } else if (name == "quartic-aero") {
            if (const auto r = aeros_fit(g, cell, 2)) consider(r->model, r->stencil, name);
        } else if (name == "linear-obera") {
            FitConfig fc;
            fc.family = Family::Linear;
            fc.loss = LossConfig{Norm::L1, 1.0};
            consider(obera_fit(g, cell, fc).model, centered_stencil(cell), name);
        } else if (name == "linear-obera-w") {
            FitConfig fc;
            fc.family = Family::Linear;
            fc.loss = LossConfig{Norm::L2, 100.0};
            consider(obera_fit(g, cell, fc).model, centered_stencil(cell), name);
        } else if (name == "quadratic-obera-non-adaptive") {
            FitConfig fc;
            fc.family = Family::Quadratic;
            fc.loss = LossConfig{Norm::L2, 100.0};
            consider(obera_fit(g, cell, fc).model, centered_stencil(cell), name);
        } else {
            throw std::invalid_argument("aggregate: unknown method " + name);
        }
    }
    if (!std::isfinite(best.loss)) {
        best.model = ConstantModel{g.at(cell.i, cell.j)};
        best.stencil = common;
        best.method = "piecewise-constant";
        best.fell_back = true;
    }
    return best;
}

}  // namespace subcell
