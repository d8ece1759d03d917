#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "subcell/distance.hpp"
#include "subcell/grid.hpp"
#include "subcell/parallel.hpp"
#include "subcell/pipeline.hpp"
#include "subcell/recon.hpp"

namespace subcell {

/// Linear transport with constant velocity b = (b_x, 0), unit time steps and
/// periodic boundary. The default b_x = h/4 keeps the CFL condition.
struct TransportConfig {
    MethodSpec method{"elvira-w-oriented"};
    double bx = -1.0;  // < 0: use h/4
    int workers = 1;
    double overshoot_tol = 1e-10;

    double velocity(double h) const { return bx < 0.0 ? 0.25 * h : bx; }
};

struct SchemeInstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical flux of cell (i,j): the mean of its local reconstruction over the
/// swept region R_T = [(i+1)h - b_x, (i+1)h] x [jh, (j+1)h].
inline double flux(const Reconstruction& rec, int i, int j, const TransportConfig& cfg) {
    const double h = rec.grid.h();
    const double bx = cfg.velocity(h);
    if (!(bx > 0.0 && bx <= h)) throw std::invalid_argument("flux: need 0 < b_x <= h (CFL)");
    const Box swept((i + 1) * h - bx, j * h, (i + 1) * h, (j + 1) * h);
    return cell_average(rec.model_at(i, j), swept);
}

/// One finite-volume step: reconstruct, compute all fluxes, update
/// a_{i,j} += (b_x/h) (F_{i-1,j} - F_{i,j}) with periodic wrap in i.
/// Overshoots beyond the tolerance abort with diagnostics; smaller ones clamp.
inline CellGrid step(const CellGrid& g, const TransportConfig& cfg) {
    const int l = g.l();
    const double h = g.h();
    const double bx = cfg.velocity(h);
    const Reconstruction rec = reconstruct(g, cfg.method, cfg.workers);

    std::vector<double> fluxes(static_cast<std::size_t>(l) * l);
    parallel_for(static_cast<std::size_t>(l) * l, cfg.workers, [&](std::size_t idx) {
        const int j = static_cast<int>(idx) / l;
        const int i = static_cast<int>(idx) % l;
        fluxes[idx] = flux(rec, i, j, cfg);
    });

    CellGrid out(l);
    const double scale = bx / h;
    for (int j = 0; j < l; ++j) {
        for (int i = 0; i < l; ++i) {
            const double fin = fluxes[static_cast<std::size_t>(j) * l + g.wrap(i - 1)];
            const double fout = fluxes[static_cast<std::size_t>(j) * l + i];
            double v = g.at(i, j) + scale * (fin - fout);
            if (v < -cfg.overshoot_tol || v > 1.0 + cfg.overshoot_tol)
                throw SchemeInstabilityError("finite-volume update left [0,1] at cell (" + std::to_string(i) + "," +
                                             std::to_string(j) + "): " + std::to_string(v));
            out.set(i, j, std::clamp(v, 0.0, 1.0));
        }
    }
    return out;
}

struct EvolveTracePoint {
    int step = 0;
    double shift = 0.0;
    double error = 0.0;
    double mass = 0.0;
};

struct EvolveResult {
    std::vector<EvolveTracePoint> trace;
    CellGrid final_grid;
    std::vector<std::pair<int, Reconstruction>> snapshots;
};

/// Error of the reconstruction against the exactly translated ground truth,
/// accounting for the periodic wrap by comparing each cell against the
/// periodic image(s) of the shape that intersect it.
inline double periodic_l1_error(const Reconstruction& rec, const Shape& truth, double shift, double tol = 1e-12) {
    const double frac = shift - std::floor(shift);
    std::vector<Shape> images;
    std::vector<Box> image_boxes;
    for (double s : {frac - 1.0, frac, frac + 1.0}) {
        Shape moved = truth.translated({s, 0.0});
        const Box bb = moved.bounding_box();
        if (bb.x1 <= 0.0 || bb.x0 >= 1.0) continue;
        images.push_back(std::move(moved));
        image_boxes.push_back(bb);
    }

    const CellGrid& g = rec.grid;
    const double cell_tol = tol / std::max<std::size_t>(1, rec.singular.size());

    auto error_against = [&](const InterfaceModel& m, const Shape& img, const Box& region) {
        if (const auto* c = std::get_if<ConstantModel>(&m)) {
            const double cov = img.coverage(region, cell_tol);
            return cov * (1.0 - c->value) + (region.area() - cov) * c->value;
        }
        return l1_shape_distance(img, m, region, cell_tol);
    };
    auto model_mass = [&](const InterfaceModel& m, const Box& region) {
        if (const auto* c = std::get_if<ConstantModel>(&m)) return c->value * region.area();
        return cell_average(m, region) * region.area();
    };

    double total = 0.0;
    for (int j = 0; j < g.l(); ++j) {
        for (int i = 0; i < g.l(); ++i) {
            const Box cell = g.cell_box(i, j);
            const InterfaceModel m = rec.model_at(i, j);
            // which images intersect this cell
            std::vector<int> hits;
            for (std::size_t idx = 0; idx < images.size(); ++idx) {
                const Box& bb = image_boxes[idx];
                if (!(cell.x1 <= bb.x0 || cell.x0 >= bb.x1 || cell.y1 <= bb.y0 || cell.y0 >= bb.y1))
                    hits.push_back(static_cast<int>(idx));
            }
            if (hits.empty()) {
                total += model_mass(m, cell);  // truth vanishes here
            } else if (hits.size() == 1) {
                total += error_against(m, images[static_cast<std::size_t>(hits[0])], cell);
            } else {
                // cell straddles the gap between two periodic images: split at
                // the midline of the gap, each part meets one image
                const Box& left_bb = image_boxes[static_cast<std::size_t>(hits[0])];
                const Box& right_bb = image_boxes[static_cast<std::size_t>(hits[1])];
                const double cut = std::clamp(0.5 * (left_bb.x1 + right_bb.x0), cell.x0, cell.x1);
                const Box left(cell.x0, cell.y0, cut, cell.y1);
                const Box right(cut, cell.y0, cell.x1, cell.y1);
                if (left.width() > 0.0) total += error_against(m, images[static_cast<std::size_t>(hits[0])], left);
                if (right.width() > 0.0) total += error_against(m, images[static_cast<std::size_t>(hits[1])], right);
            }
        }
    }
    return total;
}

/// March `steps` unit time steps, recording the L1 error against the exactly
/// translated shape (and total mass) at every step; reconstruction snapshots
/// are kept at the scheduled step numbers.
inline EvolveResult evolve(const Shape& shape, int l, int steps, const TransportConfig& cfg,
                           const std::vector<int>& snapshot_schedule = {}, double tol = 1e-12) {
    if (steps < 0) throw std::invalid_argument("evolve: steps must be >= 0");
    CellGrid g = rasterize(shape, l);
    const double bx = cfg.velocity(g.h());
    EvolveResult out;

    auto record = [&](int stepno) {
        const double shift = bx * stepno;
        const Reconstruction rec = reconstruct(g, cfg.method, cfg.workers);
        EvolveTracePoint pt;
        pt.step = stepno;
        pt.shift = shift;
        pt.error = periodic_l1_error(rec, shape, shift, tol);
        pt.mass = total_mass(g);
        out.trace.push_back(pt);
        for (int s : snapshot_schedule)
            if (s == stepno) out.snapshots.emplace_back(stepno, rec);
    };

    record(0);
    for (int s = 1; s <= steps; ++s) {
        g = step(g, cfg);
        record(s);
    }
    out.final_grid = g;
    return out;
}

}  // namespace subcell
