#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "subcell/geom.hpp"
#include "subcell/models.hpp"
#include "subcell/shapes.hpp"

namespace subcell {

namespace detail {

// Uniform region interface used by the symmetric-difference quadrature:
// classify(box) conservative, coverage(box) exact (up to the region's own tol).
struct ShapeRegion {
    const Shape* s;
    double tol;
    BoxSide classify(const Box& b) const { return s->classify(b); }
    double coverage(const Box& b) const { return s->coverage(b, tol); }
};

struct ModelRegion {
    const InterfaceModel* m;
    BoxSide classify(const Box& b) const { return model_classify(*m, b); }
    double coverage(const Box& b) const { return cell_average(*m, b) * b.area(); }
};

// area of (A symmetric-difference B) ∩ box; recursion splits only boxes
// straddling both boundaries, every other box is finished with exact coverage
template <class RA, class RB>
double sym_diff_rec(const RA& a, const RB& b, const Box& box, double tol) {
    const BoxSide ca = a.classify(box);
    if (ca == BoxSide::Inside) return box.area() - b.coverage(box);
    if (ca == BoxSide::Outside) return b.coverage(box);
    const BoxSide cb = b.classify(box);
    if (cb == BoxSide::Inside) return box.area() - a.coverage(box);
    if (cb == BoxSide::Outside) return a.coverage(box);
    if (box.area() <= 2.0 * tol) return 0.5 * box.area();
    Box b0 = box, b1 = box;
    if (box.width() >= box.height()) {
        const double xm = 0.5 * (box.x0 + box.x1);
        b0.x1 = xm;
        b1.x0 = xm;
    } else {
        const double ym = 0.5 * (box.y0 + box.y1);
        b0.y1 = ym;
        b1.y0 = ym;
    }
    return sym_diff_rec(a, b, b0, 0.5 * tol) + sym_diff_rec(a, b, b1, 0.5 * tol);
}

// L1 distance between an indicator-region and a constant value c on box
template <class R>
double l1_vs_constant(const R& reg, double c, const Box& box) {
    const double cov = reg.coverage(box);
    return cov * (1.0 - c) + (box.area() - cov) * c;
}

}  // namespace detail

/// |{a=1} Δ {b=1} ∩ region| within tol. Constants integrate in closed form.
inline double l1_model_distance(const InterfaceModel& a, const InterfaceModel& b, const Box& region,
                                double tol = 1e-13) {
    const auto* ca = std::get_if<ConstantModel>(&a);
    const auto* cb = std::get_if<ConstantModel>(&b);
    if (ca && cb) return std::abs(ca->value - cb->value) * region.area();
    if (ca) return detail::l1_vs_constant(detail::ModelRegion{&b}, ca->value, region);
    if (cb) return detail::l1_vs_constant(detail::ModelRegion{&a}, cb->value, region);
    return detail::sym_diff_rec(detail::ModelRegion{&a}, detail::ModelRegion{&b}, region, tol);
}

/// L1 distance between chi_Omega and the model on region.
inline double l1_shape_distance(const Shape& shape, const InterfaceModel& m, const Box& region,
                                double tol = 1e-13) {
    if (const auto* c = std::get_if<ConstantModel>(&m))
        return detail::l1_vs_constant(detail::ShapeRegion{&shape, tol}, c->value, region);
    return detail::sym_diff_rec(detail::ShapeRegion{&shape, 0.25 * tol}, detail::ModelRegion{&m}, region, tol);
}

// ---------------------------------------------------------------------------
// Best-approximation oracle for the linear family (dense grid + nested polish)
// ---------------------------------------------------------------------------

struct LinearOracleConfig {
    int n_theta = 96;
    int n_r = 25;
    int refine_rounds = 4;
    double search_tol = 1e-8;   // quadrature tol during the sweep
    double final_tol = 1e-12;   // quadrature tol for the reported error
};

struct LinearOracleResult {
    LinearModel model;
    double error = 0.0;
};

/// Error of best approximation of chi_Omega by restricted linear interfaces on
/// a stencil region: dense (theta, r) sweep, then nested grid refinement around
/// the incumbent. The restriction keeps the line crossing the anchor cell.
inline LinearOracleResult best_linear_approx(const Shape& shape, const Box& stencil_region, const Box& anchor_cell,
                                             const LinearOracleConfig& cfg = {}) {
    const Vec2 zc = anchor_cell.center();
    auto eval = [&](double theta, double r, double tol) {
        const LinearModel lm{theta, r, zc};
        return l1_shape_distance(shape, InterfaceModel{lm}, stencil_region, tol);
    };

    double best_theta = 0.0, best_r = 0.0;
    double best_err = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.n_theta; ++it) {
        const double theta = 2.0 * kPi * (it + 0.5) / cfg.n_theta;
        const double rho = line_offset_limit(theta, anchor_cell);
        for (int ir = 0; ir < cfg.n_r; ++ir) {
            const double r = -rho + 2.0 * rho * ir / (cfg.n_r - 1);
            const double e = eval(theta, r, cfg.search_tol);
            if (e < best_err) {
                best_err = e;
                best_theta = theta;
                best_r = r;
            }
        }
    }
    // nested refinement, always keeping the incumbent on the sub-grid
    double dt = 2.0 * kPi / cfg.n_theta;
    double rho0 = line_offset_limit(best_theta, anchor_cell);
    double dr = 2.0 * rho0 / (cfg.n_r - 1);
    for (int round = 0; round < cfg.refine_rounds; ++round) {
        const double tol = std::max(cfg.final_tol, cfg.search_tol * std::pow(0.1, round + 1));
        bool improved = true;
        while (improved) {
            improved = false;
            for (int a = -2; a <= 2; ++a) {
                for (int bdx = -2; bdx <= 2; ++bdx) {
                    if (a == 0 && bdx == 0) continue;
                    const double th = best_theta + a * dt * 0.5;
                    const double rho = line_offset_limit(th, anchor_cell);
                    const double rr = std::clamp(best_r + bdx * dr * 0.5, -rho, rho);
                    const double e = eval(th, rr, tol);
                    if (e < best_err) {
                        best_err = e;
                        best_theta = th;
                        best_r = rr;
                        improved = true;
                    }
                }
            }
        }
        dt *= 0.25;
        dr *= 0.25;
    }
    const double final_err = eval(best_theta, best_r, cfg.final_tol);
    return {LinearModel{wrap_angle(best_theta), best_r, zc}, final_err};
}

}  // namespace subcell
