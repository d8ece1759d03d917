#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "subcell/grid.hpp"
#include "subcell/models.hpp"

namespace subcell {

/// One fitted singular cell: model, the stencil it was fitted on, the loss it
/// achieved, the method tag that produced it, and fit telemetry.
struct CellFit {
    CellIndex cell;
    InterfaceModel model = ConstantModel{0.0};
    Stencil stencil;
    double loss = 0.0;
    std::string method;
    double fit_seconds = 0.0;
    bool converged = true;
    int fallbacks = 0;
};

/// Whole-grid reconstruction: per-singular-cell fits, every other cell carries
/// its constant observed average.
struct Reconstruction {
    CellGrid grid;
    SingularSet singular;
    std::vector<CellFit> fits;                // parallel to `singular`
    std::unordered_map<long, int> fit_index;  // key(j*l + i) -> index into fits

    long key(int i, int j) const { return static_cast<long>(grid.wrap(j)) * grid.l() + grid.wrap(i); }

    const CellFit* fit_at(int i, int j) const {
        const auto it = fit_index.find(key(i, j));
        return it == fit_index.end() ? nullptr : &fits[static_cast<std::size_t>(it->second)];
    }

    /// Local model of any cell: the fitted model on singular cells, the
    /// observed constant elsewhere.
    InterfaceModel model_at(int i, int j) const {
        if (const CellFit* f = fit_at(i, j)) return f->model;
        return ConstantModel{grid.at(i, j)};
    }
};

}  // namespace subcell
