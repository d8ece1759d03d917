#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "subcell/geom.hpp"
#include "subcell/grid.hpp"
#include "subcell/polyroots.hpp"

namespace subcell {

/// The four subgraph/epigraph forms of an oriented interface.
enum class Orientation { YLeq, YGeq, XLeq, XGeq };

inline bool is_vertical_graph(Orientation o) { return o == Orientation::YLeq || o == Orientation::YGeq; }

/// Signed lattice/world maps turning every orientation into a canonical frame
/// with the graph axis s, the value axis t, and the inside at small t.
struct OrientedFrame {
    Orientation orient = Orientation::YLeq;

    CellIndex cell_of(int s, int t) const {
        switch (orient) {
            case Orientation::YLeq: return {s, t};
            case Orientation::YGeq: return {s, -t};
            case Orientation::XLeq: return {t, s};
            default: return {-t, s};  // XGeq
        }
    }

    std::pair<int, int> st_of(int i, int j) const {
        switch (orient) {
            case Orientation::YLeq: return {i, j};
            case Orientation::YGeq: return {i, -j};
            case Orientation::XLeq: return {j, i};
            default: return {j, -i};  // XGeq
        }
    }

    /// World direction of a frame vector (s,t).
    Vec2 world_vec(double s, double t) const {
        switch (orient) {
            case Orientation::YLeq: return {s, t};
            case Orientation::YGeq: return {s, -t};
            case Orientation::XLeq: return {t, s};
            default: return {-t, s};  // XGeq
        }
    }
};

/// Rectangular stencil window around an anchor cell, with orientation-relative
/// extents: k along the graph axis, l along the value axis.
struct Stencil {
    CellIndex anchor;
    int k_minus = 1;
    int k_plus = 1;
    int l_minus = 1;
    int l_plus = 1;
    Orientation orient = Orientation::YLeq;

    int width() const { return 1 + k_minus + k_plus; }
    int height() const { return 1 + l_minus + l_plus; }

    struct GridRange {
        int i0, i1, j0, j1;  // inclusive, unwrapped
    };

    GridRange grid_range() const {
        const OrientedFrame f{orient};
        const auto [s0, t0] = f.st_of(anchor.i, anchor.j);
        const CellIndex a = f.cell_of(s0 - k_minus, t0 - l_minus);
        const CellIndex b = f.cell_of(s0 + k_plus, t0 + l_plus);
        return {std::min(a.i, b.i), std::max(a.i, b.i), std::min(a.j, b.j), std::max(a.j, b.j)};
    }

    /// Whole-window box in world coordinates (unwrapped).
    Box window_box(double h) const {
        const GridRange r = grid_range();
        return Box(r.i0 * h, r.j0 * h, (r.i1 + 1) * h, (r.j1 + 1) * h);
    }

    /// Periodic-aware membership test for a cell on an l x l grid.
    bool contains_cell(int i, int j, int grid_l) const {
        const GridRange r = grid_range();
        auto wrap_in = [grid_l](int v, int lo, int hi) {
            for (int rep = -1; rep <= 1; ++rep) {
                const int w = v + rep * grid_l;
                if (w >= lo && w <= hi) return true;
            }
            return false;
        };
        return wrap_in(i, r.i0, r.i1) && wrap_in(j, r.j0, r.j1);
    }

    /// Base elevation b_T of the stencil's lower edge along the value axis, in
    /// the oriented frame's lattice coordinates times h.
    double base_elevation(double h) const {
        const OrientedFrame f{orient};
        const auto [s0, t0] = f.st_of(anchor.i, anchor.j);
        (void)s0;
        return (t0 - l_minus) * h;
    }

    /// Lower edge of the window along the value axis in anchor-centered units
    /// (anchor cell spans [-1/2, 1/2]).
    double hat_base() const { return -(l_minus + 0.5); }
};

// ---------------------------------------------------------------------------
// Interface models: the nonlinear families with exact cell-average kernels.
// ---------------------------------------------------------------------------

inline Vec2 normal_of_angle(double theta) { return {-std::sin(theta), std::cos(theta)}; }

/// Half-plane {dot(z - anchor, e_theta) <= r}, e_theta = (-sin t, cos t);
/// theta is the angle between the interface line and the horizontal axis,
/// r the offset from the anchor point along the outward normal.
struct LinearModel {
    double theta = 0.0;
    double r = 0.0;
    Vec2 anchor;

    Vec2 normal() const { return normal_of_angle(theta); }
    Vec2 point_on_line() const { return anchor + normal() * r; }
};

struct CircleModel {
    Vec2 center;
    double radius = 1.0;
    bool inside = true;  // true: disc; false: complement of the disc
};

/// Oriented polynomial subgraph/epigraph in anchor-centered local coordinates
/// x_hat = (x - anchor.x)/h, y_hat = (y - anchor.y)/h. The anchor is the center
/// of the anchor cell, so conditioning is h-independent.
struct OrientedPolyModel {
    Orientation orient = Orientation::YLeq;
    Vec2 anchor;
    double h = 1.0;
    Polynomial p;

    OrientedPolyModel() = default;
    OrientedPolyModel(Orientation o, Vec2 a, double h_, Polynomial poly)
        : orient(o), anchor(a), h(h_), p(std::move(poly)) {
        if (p.degree() > 4) throw std::invalid_argument("OrientedPolyModel: degree must be <= 4");
    }
};

/// Two half-planes through an apex; inside is their intersection (join=false)
/// or union (join=true). Angles follow the LinearModel normal convention.
struct CornerModel {
    Vec2 apex;
    double theta1 = 0.0;
    double theta2 = 0.0;
    bool join = false;
};

struct ConstantModel {
    double value = 0.0;
};

using InterfaceModel = std::variant<ConstantModel, LinearModel, CircleModel, OrientedPolyModel, CornerModel>;

// ---------------------------------------------------------------------------
// Membership and conservative box classification
// ---------------------------------------------------------------------------

inline bool model_contains(const InterfaceModel& m, const Vec2& z);

namespace detail {

inline bool contains(const ConstantModel& m, const Vec2&) { return m.value >= 0.5; }

inline bool contains(const LinearModel& m, const Vec2& z) { return dot(z - m.anchor, m.normal()) <= m.r; }

inline bool contains(const CircleModel& m, const Vec2& z) {
    const Vec2 d = z - m.center;
    const bool in_disc = dot(d, d) <= m.radius * m.radius;
    return m.inside ? in_disc : !in_disc;
}

inline std::pair<double, double> poly_uv(const OrientedPolyModel& m, const Vec2& z) {
    // returns (graph coordinate, value coordinate) in hat units
    const double xh = (z.x - m.anchor.x) / m.h;
    const double yh = (z.y - m.anchor.y) / m.h;
    if (is_vertical_graph(m.orient)) return {xh, yh};
    return {yh, xh};
}

inline bool contains(const OrientedPolyModel& m, const Vec2& z) {
    const auto [u, v] = poly_uv(m, z);
    const double pv = m.p.eval(u);
    return (m.orient == Orientation::YLeq || m.orient == Orientation::XLeq) ? v <= pv : v >= pv;
}

inline bool contains(const CornerModel& m, const Vec2& z) {
    const bool h1 = dot(z - m.apex, normal_of_angle(m.theta1)) <= 0.0;
    const bool h2 = dot(z - m.apex, normal_of_angle(m.theta2)) <= 0.0;
    return m.join ? (h1 || h2) : (h1 && h2);
}

}  // namespace detail

inline bool model_contains(const InterfaceModel& m, const Vec2& z) {
    return std::visit([&](const auto& mm) { return detail::contains(mm, z); }, m);
}

namespace detail {

// extrema of p over [a,b] from endpoints and interior critical points
inline std::pair<double, double> poly_range(const Polynomial& p, double a, double b) {
    double lo = p.eval(a), hi = lo;
    const double pb = p.eval(b);
    lo = std::min(lo, pb);
    hi = std::max(hi, pb);
    for (double r : real_roots_in(p.derivative(), a, b)) {
        const double v = p.eval(r);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

inline BoxSide classify(const ConstantModel& m, const Box&) {
    if (m.value <= 0.0) return BoxSide::Outside;
    if (m.value >= 1.0) return BoxSide::Inside;
    return BoxSide::Straddle;
}

inline BoxSide classify(const LinearModel& m, const Box& box) {
    return halfplane_box_side(m.point_on_line(), m.normal(), box);
}

inline BoxSide classify(const CircleModel& m, const Box& box) {
    const BoxSide s = circle_box_side(m.center, m.radius, box);
    if (m.inside || s == BoxSide::Straddle) return s;
    return s == BoxSide::Inside ? BoxSide::Outside : BoxSide::Inside;
}

inline std::pair<std::pair<double, double>, std::pair<double, double>> poly_box_uv(const OrientedPolyModel& m,
                                                                                   const Box& box) {
    const double ux0 = (box.x0 - m.anchor.x) / m.h, ux1 = (box.x1 - m.anchor.x) / m.h;
    const double uy0 = (box.y0 - m.anchor.y) / m.h, uy1 = (box.y1 - m.anchor.y) / m.h;
    if (is_vertical_graph(m.orient)) return {{ux0, ux1}, {uy0, uy1}};
    return {{uy0, uy1}, {ux0, ux1}};
}

inline BoxSide classify(const OrientedPolyModel& m, const Box& box) {
    const auto [urange, vrange] = poly_box_uv(m, box);
    const auto [plo, phi] = poly_range(m.p, urange.first, urange.second);
    const bool leq = (m.orient == Orientation::YLeq || m.orient == Orientation::XLeq);
    if (leq) {
        if (vrange.second <= plo) return BoxSide::Inside;
        if (vrange.first >= phi) return BoxSide::Outside;
    } else {
        if (vrange.first >= phi) return BoxSide::Inside;
        if (vrange.second <= plo) return BoxSide::Outside;
    }
    return BoxSide::Straddle;
}

inline BoxSide classify(const CornerModel& m, const Box& box) {
    const BoxSide s1 = halfplane_box_side(m.apex, normal_of_angle(m.theta1), box);
    const BoxSide s2 = halfplane_box_side(m.apex, normal_of_angle(m.theta2), box);
    if (!m.join) {
        if (s1 == BoxSide::Outside || s2 == BoxSide::Outside) return BoxSide::Outside;
        if (s1 == BoxSide::Inside && s2 == BoxSide::Inside) return BoxSide::Inside;
    } else {
        if (s1 == BoxSide::Inside || s2 == BoxSide::Inside) return BoxSide::Inside;
        if (s1 == BoxSide::Outside && s2 == BoxSide::Outside) return BoxSide::Outside;
    }
    return BoxSide::Straddle;
}

}  // namespace detail

inline BoxSide model_classify(const InterfaceModel& m, const Box& box) {
    return std::visit([&](const auto& mm) { return detail::classify(mm, box); }, m);
}

// ---------------------------------------------------------------------------
// Exact cell averages (the parameter-to-average map)
// ---------------------------------------------------------------------------

namespace detail {

inline double cell_avg(const ConstantModel& m, const Box&) { return m.value; }

inline double cell_avg(const LinearModel& m, const Box& box) {
    return halfplane_box_area(m.point_on_line(), m.normal(), box) / box.area();
}

inline double cell_avg(const CircleModel& m, const Box& box) {
    const double a = circle_box_area(m.center, m.radius, box) / box.area();
    return m.inside ? a : 1.0 - a;
}

inline double cell_avg(const OrientedPolyModel& m, const Box& box) {
    const auto [urange, vrange] = poly_box_uv(m, box);
    const double du = urange.second - urange.first;
    const double dv = vrange.second - vrange.first;
    const double below =
        integrate_clamped(m.p, urange.first, urange.second, vrange.first, vrange.second) - vrange.first * du;
    const double frac = below / (du * dv);
    const bool leq = (m.orient == Orientation::YLeq || m.orient == Orientation::XLeq);
    return leq ? frac : 1.0 - frac;
}

inline double cell_avg(const CornerModel& m, const Box& box) {
    const Vec2 n1 = normal_of_angle(m.theta1);
    const Vec2 n2 = normal_of_angle(m.theta2);
    auto meet_area = [&]() {
        Poly poly = box_polygon(box);
        poly = clip_polygon_halfplane(poly, m.apex, n1);
        poly = clip_polygon_halfplane(poly, m.apex, n2);
        return poly.empty() ? 0.0 : std::abs(polygon_area(poly));
    };
    if (!m.join) return meet_area() / box.area();
    const double a1 = halfplane_box_area(m.apex, n1, box);
    const double a2 = halfplane_box_area(m.apex, n2, box);
    return (a1 + a2 - meet_area()) / box.area();
}

}  // namespace detail

/// Exact |cell ∩ {v=1}| / |cell|.
inline double cell_average(const InterfaceModel& m, const Box& cell) {
    if (!(cell.width() > 0.0 && cell.height() > 0.0))
        throw std::invalid_argument("cell_average: cell must have positive area");
    const double a = std::visit([&](const auto& mm) { return detail::cell_avg(mm, cell); }, m);
    return std::clamp(a, 0.0, 1.0);
}

/// Model averages over every cell of the stencil window, row-major
/// (grid j ascending outer, i ascending inner).
inline std::vector<double> stencil_averages(const InterfaceModel& m, const Stencil& st, double h) {
    const Stencil::GridRange r = st.grid_range();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(st.width()) * st.height());
    for (int j = r.j0; j <= r.j1; ++j)
        for (int i = r.i0; i <= r.i1; ++i)
            out.push_back(cell_average(m, Box(i * h, j * h, (i + 1) * h, (j + 1) * h)));
    return out;
}

// ---------------------------------------------------------------------------
// Complement flips, translations, restrictions
// ---------------------------------------------------------------------------

inline double wrap_angle(double t) {
    t = std::fmod(t, 2.0 * kPi);
    return t < 0.0 ? t + 2.0 * kPi : t;
}

inline InterfaceModel model_flip(const InterfaceModel& m) {
    if (const auto* c = std::get_if<ConstantModel>(&m)) return ConstantModel{1.0 - c->value};
    if (const auto* lm = std::get_if<LinearModel>(&m)) return LinearModel{wrap_angle(lm->theta + kPi), -lm->r, lm->anchor};
    if (const auto* cm = std::get_if<CircleModel>(&m)) return CircleModel{cm->center, cm->radius, !cm->inside};
    if (const auto* pm = std::get_if<OrientedPolyModel>(&m)) {
        Orientation o;
        switch (pm->orient) {
            case Orientation::YLeq: o = Orientation::YGeq; break;
            case Orientation::YGeq: o = Orientation::YLeq; break;
            case Orientation::XLeq: o = Orientation::XGeq; break;
            default: o = Orientation::XLeq; break;
        }
        return OrientedPolyModel{o, pm->anchor, pm->h, pm->p};
    }
    const auto& km = std::get<CornerModel>(m);
    return CornerModel{km.apex, wrap_angle(km.theta1 + kPi), wrap_angle(km.theta2 + kPi), !km.join};
}

inline InterfaceModel model_translate(const InterfaceModel& m, const Vec2& d) {
    if (const auto* c = std::get_if<ConstantModel>(&m)) return *c;
    if (const auto* lm = std::get_if<LinearModel>(&m)) return LinearModel{lm->theta, lm->r, lm->anchor + d};
    if (const auto* cm = std::get_if<CircleModel>(&m)) return CircleModel{cm->center + d, cm->radius, cm->inside};
    if (const auto* pm = std::get_if<OrientedPolyModel>(&m))
        return OrientedPolyModel{pm->orient, pm->anchor + d, pm->h, pm->p};
    const auto& km = std::get<CornerModel>(m);
    return CornerModel{km.apex + d, km.theta1, km.theta2, km.join};
}

/// Support radius of a box in the direction of angle theta: the line
/// {dot(z - center, e_theta) = r} meets the box iff |r| <= this value.
inline double line_offset_limit(double theta, const Box& box) {
    return 0.5 * (std::abs(std::sin(theta)) * box.width() + std::abs(std::cos(theta)) * box.height());
}

/// Injectivity restrictions of the families on a given stencil geometry.
inline bool restriction_ok(const InterfaceModel& m, const Box& window, const Box& anchor_cell) {
    if (std::holds_alternative<ConstantModel>(m)) return true;
    if (const auto* lm = std::get_if<LinearModel>(&m)) {
        // the interface line must cross the anchor cell
        const BoxSide s = halfplane_box_side(lm->point_on_line(), lm->normal(), anchor_cell);
        return s == BoxSide::Straddle;
    }
    if (const auto* cm = std::get_if<CircleModel>(&m)) {
        // the disc center must not be contained in the stencil support
        return !window.contains(cm->center);
    }
    if (const auto* pm = std::get_if<OrientedPolyModel>(&m)) {
        // the graph must remain confined in the stencil along the value axis
        const auto [urange, vrange] = detail::poly_box_uv(*pm, window);
        const auto [lo, hi] = detail::poly_range(pm->p, urange.first, urange.second);
        return lo >= vrange.first && hi <= vrange.second;
    }
    return true;  // corner admissibility is enforced at fit time
}

// ---------------------------------------------------------------------------
// Interface sampling (for SVG overlays)
// ---------------------------------------------------------------------------

inline std::vector<Poly> sample_interface(const InterfaceModel& m, const Box& box, int n = 64) {
    std::vector<Poly> out;
    auto emit_graph = [&](auto f, double u0, double u1, bool vertical) {
        Poly run;
        for (int k = 0; k <= n; ++k) {
            const double u = u0 + (u1 - u0) * k / n;
            const double v = f(u);
            const Vec2 z = vertical ? Vec2{u, v} : Vec2{v, u};
            if (box.contains(z)) {
                run.push_back(z);
            } else if (run.size() >= 2) {
                out.push_back(run);
                run.clear();
            } else {
                run.clear();
            }
        }
        if (run.size() >= 2) out.push_back(run);
    };
    if (const auto* lm = std::get_if<LinearModel>(&m)) {
        const Vec2 e = lm->normal();
        const Vec2 dir{std::cos(lm->theta), std::sin(lm->theta)};
        const Vec2 p0 = lm->point_on_line();
        const double diam = std::hypot(box.width(), box.height());
        Poly run;
        for (int k = 0; k <= n; ++k) {
            const double t = -diam + 2.0 * diam * k / n;
            const Vec2 z = p0 + dir * t;
            if (box.contains(z)) run.push_back(z);
        }
        (void)e;
        if (run.size() >= 2) out.push_back(run);
    } else if (const auto* cm = std::get_if<CircleModel>(&m)) {
        Poly run;
        const int steps = 4 * n;
        for (int k = 0; k <= steps; ++k) {
            const double phi = 2.0 * kPi * k / steps;
            const Vec2 z{cm->center.x + cm->radius * std::cos(phi), cm->center.y + cm->radius * std::sin(phi)};
            if (box.contains(z)) {
                run.push_back(z);
            } else if (run.size() >= 2) {
                out.push_back(run);
                run.clear();
            } else {
                run.clear();
            }
        }
        if (run.size() >= 2) out.push_back(run);
    } else if (const auto* pm = std::get_if<OrientedPolyModel>(&m)) {
        const bool vertical = is_vertical_graph(pm->orient);
        const double u0 = vertical ? box.x0 : box.y0;
        const double u1 = vertical ? box.x1 : box.y1;
        const Vec2 a = pm->anchor;
        const double h = pm->h;
        emit_graph(
            [&](double u) {
                const double uh = (u - (vertical ? a.x : a.y)) / h;
                return (vertical ? a.y : a.x) + h * pm->p.eval(uh);
            },
            u0, u1, vertical);
    } else if (const auto* km = std::get_if<CornerModel>(&m)) {
        for (double th : {km->theta1, km->theta2}) {
            const Vec2 dir{std::cos(th), std::sin(th)};
            const double diam = std::hypot(box.width(), box.height());
            for (double sgn : {-1.0, 1.0}) {
                Poly run;
                for (int k = 0; k <= n; ++k) {
                    const Vec2 z = km->apex + dir * (sgn * diam * k / n);
                    if (!box.contains(z)) break;
                    if (model_contains(m, z + Vec2{0, 0}))  // rays bounding the region
                        run.push_back(z);
                }
                if (run.size() >= 2) out.push_back(run);
            }
        }
    }
    return out;
}

}  // namespace subcell
