#pragma once

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "subcell/aeros.hpp"
#include "subcell/distance.hpp"
#include "subcell/elvira.hpp"
#include "subcell/grid.hpp"
#include "subcell/obera.hpp"
#include "subcell/parallel.hpp"
#include "subcell/recon.hpp"
#include "subcell/vertex.hpp"

namespace subcell {

/// The benchmarked reconstruction strategies plus the corner-aware aggregate.
inline const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names{
        "piecewise-constant",          "linear-obera",  "linear-obera-w",
        "elvira",                      "elvira-w-oriented", "quadratic-obera-non-adaptive",
        "quadratic-aero",              "quartic-aero",  "aero-qelvira-vertex"};
    return names;
}

struct MethodSpec {
    std::string name = "elvira";

    static MethodSpec parse(const std::string& name) {
        for (const auto& n : method_names())
            if (n == name) return MethodSpec{name};
        throw std::invalid_argument("unknown method: " + name);
    }
};

namespace detail {

inline double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

// single-cell fit with the documented fallback chain
// quartic -> quadratic -> elvira-wo -> piecewise-constant
inline CellFit fit_cell(const CellGrid& g, CellIndex cell, const MethodSpec& spec) {
    CellFit out;
    out.cell = cell;
    const double t0 = now_seconds();
    const LossConfig weighted{Norm::L2, 100.0};

    auto finish = [&](InterfaceModel m, Stencil st, double lval, const std::string& tag) {
        out.model = std::move(m);
        out.stencil = st;
        out.loss = lval;
        out.method = tag;
        out.fit_seconds = now_seconds() - t0;
        return out;
    };
    auto elvira_wo_fallback = [&] {
        const ElviraSelection s = elvira_wo_fit(g, cell);
        return finish(InterfaceModel{s.model}, centered_stencil(cell), s.loss, "elvira-w-oriented");
    };
    auto aeros_or_fallback = [&](int k) {
        for (int kk = k; kk >= 1; --kk) {
            if (const auto r = aeros_fit(g, cell, kk)) {
                return finish(r->model, r->stencil, loss_on_grid(g, r->model, centered_stencil(cell), weighted),
                              kk == 2 ? "quartic-aero" : "quadratic-aero");
            }
            ++out.fallbacks;
        }
        CellFit f = elvira_wo_fallback();
        f.fallbacks = out.fallbacks;
        return f;
    };

    if (spec.name == "piecewise-constant")
        return finish(ConstantModel{g.at(cell.i, cell.j)}, centered_stencil(cell), 0.0, spec.name);
    if (spec.name == "elvira") {
        const ElviraSelection s = elvira_fit(g, cell);
        return finish(InterfaceModel{s.model}, centered_stencil(cell), s.loss, spec.name);
    }
    if (spec.name == "elvira-w-oriented") return elvira_wo_fallback();
    if (spec.name == "quadratic-aero") return aeros_or_fallback(1);
    if (spec.name == "quartic-aero") return aeros_or_fallback(2);
    if (spec.name == "linear-obera" || spec.name == "linear-obera-w" || spec.name == "quadratic-obera-non-adaptive") {
        FitConfig fc;
        if (spec.name == "linear-obera") {
            fc.family = Family::Linear;
            fc.loss = LossConfig{Norm::L1, 1.0};
        } else if (spec.name == "linear-obera-w") {
            fc.family = Family::Linear;
            fc.loss = LossConfig{Norm::L2, 100.0};
        } else {
            fc.family = Family::Quadratic;
            fc.loss = LossConfig{Norm::L2, 100.0};
        }
        const FitResult r = obera_fit(g, cell, fc);
        CellFit f = finish(r.model, r.stencil, r.loss, spec.name);
        f.converged = r.converged;
        return f;
    }
    throw std::invalid_argument("fit_cell: unhandled method " + spec.name);
}

}  // namespace detail

/// Whole-grid reconstruction. Singular cells get the spec'd method (with the
/// fallback chain absorbing per-cell failures); every other cell carries its
/// observed constant. The corner-aware aggregate runs two passes: base fits,
/// then TEM / AEROS-Vertex refinement competing by loss.
inline Reconstruction reconstruct(const CellGrid& g, const MethodSpec& spec, int workers = 1,
                                  double eps = kSingularEps) {
    Reconstruction rec;
    rec.grid = g;
    rec.singular = classify_singular(g, eps);
    rec.fits.resize(rec.singular.size());

    const bool aggregate_method = (spec.name == "aero-qelvira-vertex");
    if (!aggregate_method) {
        parallel_for(rec.singular.size(), workers,
                     [&](std::size_t idx) { rec.fits[idx] = detail::fit_cell(g, rec.singular[idx], spec); });
    } else {
        const LossConfig cfg{Norm::L2, 100.0};
        const std::vector<std::string> base_methods{"elvira-w-oriented", "quadratic-aero"};
        parallel_for(rec.singular.size(), workers, [&](std::size_t idx) {
            const CellIndex cell = rec.singular[idx];
            const double t0 = detail::now_seconds();
            const Aggregated a = aggregate(g, cell, base_methods, cfg);
            CellFit f;
            f.cell = cell;
            f.model = a.model;
            f.stencil = a.stencil;
            f.loss = a.loss;
            f.method = a.method;
            f.fit_seconds = detail::now_seconds() - t0;
            rec.fits[idx] = std::move(f);
        });
    }
    for (std::size_t idx = 0; idx < rec.singular.size(); ++idx)
        rec.fit_index[rec.key(rec.singular[idx].i, rec.singular[idx].j)] = static_cast<int>(idx);

    if (aggregate_method) {
        // second pass: corner candidates compete against the base fit
        const LossConfig cfg{Norm::L2, 100.0};
        std::vector<CellFit> refined = rec.fits;
        parallel_for(rec.singular.size(), workers, [&](std::size_t idx) {
            const CellIndex cell = rec.singular[idx];
            const double t0 = detail::now_seconds();
            CellFit& f = refined[idx];
            if (const auto tem = tem_fit(rec.grid, cell, rec, cfg)) {
                if (tem->loss < f.loss) {
                    f.model = InterfaceModel{tem->model};
                    f.loss = tem->loss;
                    f.method = "tem";
                }
            }
            for (const ScoredCorner& c : aeros_vertex_fit(rec.grid, cell, cfg)) {
                if (c.loss < f.loss) {
                    f.model = InterfaceModel{c.model};
                    f.loss = c.loss;
                    f.method = "aeros-vertex";
                }
            }
            f.fit_seconds += detail::now_seconds() - t0;
        });
        rec.fits = std::move(refined);
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Global L1 error, convergence studies, timing
// ---------------------------------------------------------------------------

/// Sum of per-cell L1 distances between the reconstruction and chi_Omega.
/// Cells whose observed average is exactly 0 or 1 contribute nothing beyond
/// the rasterization tolerance and are skipped.
inline double global_l1_error(const Reconstruction& rec, const Shape& truth, double tol = 1e-13) {
    const CellGrid& g = rec.grid;
    const double cell_tol = tol / std::max<std::size_t>(1, rec.singular.size());
    double total = 0.0;
    for (int j = 0; j < g.l(); ++j) {
        for (int i = 0; i < g.l(); ++i) {
            const double a = g.at(i, j);
            const Box cell = g.cell_box(i, j);
            if (const CellFit* f = rec.fit_at(i, j)) {
                total += l1_shape_distance(truth, f->model, cell, cell_tol);
            } else if (a > 0.0 && a < 1.0) {
                // regular-by-tolerance cell: constant reconstruction, closed form
                const double cov = truth.coverage(cell, cell_tol);
                total += cov * (1.0 - a) + (cell.area() - cov) * a;
            }
        }
    }
    return total;
}

struct ConvergenceRow {
    int l = 0;
    double h = 0.0;
    double error = 0.0;
    bool in_fit_range = false;
};

struct ConvergenceResult {
    std::string method;
    std::vector<ConvergenceRow> rows;
    double rate = 0.0;  // least-squares slope of log(error) vs log(h) over the fit range
};

/// Least-squares slope of log(err) against log(h) over rows marked in-range.
inline double fit_rate(const std::vector<ConvergenceRow>& rows) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const auto& r : rows) {
        if (!r.in_fit_range || !(r.error > 0.0)) continue;
        const double x = std::log(r.h);
        const double y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    return (static_cast<double>(n) * sxy - sx * sy) / (static_cast<double>(n) * sxx - sx * sx);
}

/// Rasterize the truth at every resolution, reconstruct, measure global L1
/// error, and fit the convergence rate over resolutions with 1/h >= fit_min_l.
inline ConvergenceResult convergence_study(const Shape& truth, const MethodSpec& spec,
                                           const std::vector<int>& resolutions, int fit_min_l = 30, int workers = 1,
                                           double tol = 1e-13) {
    if (resolutions.size() < 3) throw std::invalid_argument("convergence_study: need at least 3 resolutions");
    ConvergenceResult out;
    out.method = spec.name;
    for (int l : resolutions) {
        const CellGrid g = rasterize(truth, l, tol);
        const Reconstruction rec = reconstruct(g, spec, workers);
        ConvergenceRow row;
        row.l = l;
        row.h = 1.0 / l;
        row.error = global_l1_error(rec, truth, tol);
        row.in_fit_range = l >= fit_min_l;
        out.rows.push_back(row);
    }
    out.rate = fit_rate(out.rows);
    return out;
}

struct TimingRow {
    std::string method;
    double median_seconds = 0.0;
    int fits = 0;
};

/// Median per-singular-cell fit wall time, single-threaded for comparability.
inline std::vector<TimingRow> timing_study(const Shape& truth, const std::vector<MethodSpec>& specs, int l,
                                           int repetitions) {
    if (repetitions < 1) throw std::invalid_argument("timing_study: repetitions must be >= 1");
    const CellGrid g = rasterize(truth, l);
    std::vector<TimingRow> out;
    for (const MethodSpec& spec : specs) {
        std::vector<double> times;
        for (int rep = 0; rep < repetitions; ++rep) {
            const Reconstruction rec = reconstruct(g, spec, /*workers=*/1);
            for (const CellFit& f : rec.fits) times.push_back(f.fit_seconds);
        }
        std::sort(times.begin(), times.end());
        TimingRow row;
        row.method = spec.name;
        row.fits = static_cast<int>(times.size());
        row.median_seconds = times.empty() ? 0.0 : times[times.size() / 2];
        out.push_back(row);
    }
    return out;
}

}  // namespace subcell
