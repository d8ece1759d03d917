#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "subcell/grid.hpp"
#include "subcell/models.hpp"

namespace subcell {

/// Numerical gradient from the 3x3 Sobel kernels (periodic wrap).
struct NumericalGradient {
    double H = 0.0;
    double V = 0.0;
};

inline NumericalGradient sobel(const CellGrid& g, int i, int j) {
    auto a = [&](int di, int dj) { return g.at(i + di, j + dj); };
    NumericalGradient out;
    out.H = 2.0 * a(1, 0) + a(1, 1) + a(1, -1) - (2.0 * a(-1, 0) + a(-1, 1) + a(-1, -1));
    out.V = 2.0 * a(0, 1) + a(1, 1) + a(-1, 1) - (2.0 * a(0, -1) + a(1, -1) + a(-1, -1));
    return out;
}

/// Four-way orientation rule; ties |V| == |H| go to the vertical-graph branch.
inline Orientation select_orientation(const NumericalGradient& g) {
    if (std::abs(g.V) >= std::abs(g.H)) return g.V <= 0.0 ? Orientation::YLeq : Orientation::YGeq;
    return g.H <= 0.0 ? Orientation::XLeq : Orientation::XGeq;
}

/// Vertical search cap: one beyond the conservative bound of the confinement
/// theorem; past it the cell is declared unconfinable at this width.
inline int stencil_cap(int k) { return k + 4; }

namespace detail {

// in the oriented frame: true if the row at value-coordinate t is uniformly
// `ones` (or uniformly zeros) across columns [s0, s1]
inline bool clean_row(const CellGrid& g, const OrientedFrame& f, int s0, int s1, int t, bool ones, double eps) {
    for (int s = s0; s <= s1; ++s) {
        const CellIndex c = f.cell_of(s, t);
        const double a = g.at(c.i, c.j);
        if (ones ? (a < 1.0 - eps) : (a > eps)) return false;
    }
    return true;
}

}  // namespace detail

/// Adaptive oriented stencil: width 2k+1 along the graph axis, minimal height
/// such that the bounding row below the window is uniformly one and the row
/// above uniformly zero (in the oriented frame). All 2k+1 horizontal placements
/// k-+k+ = 2k are tried; minimal height wins, ties prefer the centered
/// placement and then the smaller k-. Returns nothing when no placement
/// confines the interface within the height cap (critical-scale failure).
inline std::optional<Stencil> adaptive_stencil(const CellGrid& g, CellIndex cell, Orientation orient, int k,
                                               double eps = kSingularEps) {
    if (k < 1 || k > 2) throw std::invalid_argument("adaptive_stencil: k must be 1 or 2");
    const OrientedFrame f{orient};
    const auto [s0, t0] = f.st_of(cell.i, cell.j);
    const int cap = stencil_cap(k);
    const int max_height = g.l() - 2;  // periodic wrap guard

    std::optional<Stencil> best;
    int best_height = 0, best_decenter = 0, best_kminus = 0;
    for (int km = 0; km <= 2 * k; ++km) {
        const int kp = 2 * k - km;
        const int lo = s0 - km;
        const int hi = s0 + kp;
        int lminus = -1, lplus = -1;
        for (int l = 1; l <= cap; ++l) {
            if (detail::clean_row(g, f, lo, hi, t0 - l - 1, true, eps)) {
                lminus = l;
                break;
            }
        }
        if (lminus < 0) continue;
        for (int l = 1; l <= cap; ++l) {
            if (detail::clean_row(g, f, lo, hi, t0 + l + 1, false, eps)) {
                lplus = l;
                break;
            }
        }
        if (lplus < 0) continue;
        const int height = 1 + lminus + lplus;
        if (height > max_height) continue;
        const int decenter = std::abs(km - k);
        if (!best || height < best_height ||
            (height == best_height && (decenter < best_decenter || (decenter == best_decenter && km < best_kminus)))) {
            best = Stencil{cell, km, kp, lminus, lplus, orient};
            best_height = height;
            best_decenter = decenter;
            best_kminus = km;
        }
    }
    return best;
}

}  // namespace subcell
