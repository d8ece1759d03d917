#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "subcell/grid.hpp"
#include "subcell/models.hpp"
#include "subcell/obera.hpp"

namespace subcell {

namespace detail {

// line with prescribed slope in the vertical-graph sense (y = s x + c), offset
// chosen so the anchor-cell average is matched exactly
inline LinearModel line_from_slope(const CellGrid& g, CellIndex cell, double slope, bool inside_below,
                                   bool vertical_graph) {
    double theta;
    if (vertical_graph)
        theta = inside_below ? std::atan(slope) : std::atan(slope) + kPi;
    else
        // graph x = s y + c; inside left means x <= s y + c
        theta = inside_below ? std::atan2(-1.0, -slope) : std::atan2(1.0, slope);
    theta = wrap_angle(theta);
    const Box anchor = g.cell_box(cell.i, cell.j);
    const double r = solve_line_offset(theta, anchor, g.at(cell.i, cell.j));
    return LinearModel{theta, r, anchor.center()};
}

}  // namespace detail

/// ELVIRA slope candidates from finite differences of column (and row) sums of
/// the 3x3 stencil. With an orientation, only the matching triple is produced
/// (3 candidates); without, both triples (6 candidates). Offsets always match
/// the anchor average exactly.
inline std::vector<LinearModel> elvira_candidates(const CellGrid& g, CellIndex cell,
                                                  std::optional<Orientation> orientation = std::nullopt) {
    std::vector<LinearModel> out;
    auto a = [&](int di, int dj) { return g.at(cell.i + di, cell.j + dj); };

    auto push_vertical = [&](bool inside_below) {
        double col[3];
        for (int d = -1; d <= 1; ++d) col[d + 1] = a(d, -1) + a(d, 0) + a(d, 1);
        const double s_left = col[1] - col[0];
        const double s_center = 0.5 * (col[2] - col[0]);
        const double s_right = col[2] - col[1];
        for (double s : {s_left, s_center, s_right})
            out.push_back(detail::line_from_slope(g, cell, s, inside_below, true));
    };
    auto push_horizontal = [&](bool inside_left) {
        double row[3];
        for (int d = -1; d <= 1; ++d) row[d + 1] = a(-1, d) + a(0, d) + a(1, d);
        const double s_bottom = row[1] - row[0];
        const double s_center = 0.5 * (row[2] - row[0]);
        const double s_top = row[2] - row[1];
        for (double s : {s_bottom, s_center, s_top})
            out.push_back(detail::line_from_slope(g, cell, s, inside_left, false));
    };

    if (orientation) {
        switch (*orientation) {
            case Orientation::YLeq: push_vertical(true); break;
            case Orientation::YGeq: push_vertical(false); break;
            case Orientation::XLeq: push_horizontal(true); break;
            case Orientation::XGeq: push_horizontal(false); break;
        }
        return out;
    }
    // side choice from the data: fuller bottom row means the inside is below
    const double bottom = a(-1, -1) + a(0, -1) + a(1, -1);
    const double top = a(-1, 1) + a(0, 1) + a(1, 1);
    const double left = a(-1, -1) + a(-1, 0) + a(-1, 1);
    const double right = a(1, -1) + a(1, 0) + a(1, 1);
    push_vertical(bottom >= top);
    push_horizontal(left >= right);
    return out;
}

struct ElviraSelection {
    LinearModel model;
    double loss = 0.0;
    int evaluations = 0;
};

/// Loss-minimizing candidate; ties resolve to the first in enumeration order.
inline ElviraSelection elvira_select(const CellGrid& g, CellIndex cell, const std::vector<LinearModel>& candidates,
                                     const LossConfig& cfg) {
    if (candidates.empty()) throw std::invalid_argument("elvira_select: no candidates");
    const Stencil st = centered_stencil(cell);
    const std::vector<double> target = window_averages(g, st);
    ElviraSelection best;
    best.evaluations = static_cast<int>(candidates.size());
    double best_loss = std::numeric_limits<double>::infinity();
    for (const LinearModel& cand : candidates) {
        const double l = loss(target, InterfaceModel{cand}, st, g.h(), cfg);
        if (l < best_loss) {
            best_loss = l;
            best.model = cand;
        }
    }
    best.loss = best_loss;
    return best;
}

/// The 6-candidate ELVIRA scheme (plain l2 loss).
inline ElviraSelection elvira_fit(const CellGrid& g, CellIndex cell) {
    return elvira_select(g, cell, elvira_candidates(g, cell), LossConfig{Norm::L2, 1.0});
}

/// The oriented, weighted 3-candidate variant (l2, K = 100).
inline ElviraSelection elvira_wo_fit(const CellGrid& g, CellIndex cell) {
    const Orientation orient = select_orientation(sobel(g, cell.i, cell.j));
    return elvira_select(g, cell, elvira_candidates(g, cell, orient), LossConfig{Norm::L2, 100.0});
}

}  // namespace subcell
