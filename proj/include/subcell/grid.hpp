#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subcell/geom.hpp"
#include "subcell/shapes.hpp"

namespace subcell {

struct CellIndex {
    int i = 0;
    int j = 0;
    bool operator==(const CellIndex& o) const { return i == o.i && j == o.j; }
};

/// Dense l x l grid of cell averages over the unit square, h = 1/l,
/// periodic index semantics in both axes. Cell (i,j) covers
/// [i*h,(i+1)*h] x [j*h,(j+1)*h]. Immutable once filled.
class CellGrid {
  public:
    CellGrid() = default;
    explicit CellGrid(int l, double fill = 0.0) : l_(l), h_(1.0 / l), a_(static_cast<std::size_t>(l) * l, fill) {
        if (l < 1) throw std::invalid_argument("CellGrid: l must be >= 1");
    }

    int l() const { return l_; }
    double h() const { return h_; }

    int wrap(int k) const {
        k %= l_;
        return k < 0 ? k + l_ : k;
    }

    double at(int i, int j) const { return a_[static_cast<std::size_t>(wrap(j)) * l_ + wrap(i)]; }
    void set(int i, int j, double v) { a_[static_cast<std::size_t>(wrap(j)) * l_ + wrap(i)] = v; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    Box cell_box(int i, int j) const {
        return Box(i * h_, j * h_, (i + 1) * h_, (j + 1) * h_);
    }
    Vec2 cell_center(int i, int j) const { return {(i + 0.5) * h_, (j + 0.5) * h_}; }

  private:
    int l_ = 0;
    double h_ = 0.0;
    std::vector<double> a_;
};

/// Exact-to-tol cell averages of the characteristic function of `shape`.
/// Fully inside/outside cells resolve to exactly 1/0.
inline CellGrid rasterize(const Shape& shape, int l, double tol = 1e-13) {
    if (l < 1) throw std::invalid_argument("rasterize: l must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("rasterize: tol must be positive");
    CellGrid g(l);
    const double cell_tol = tol * g.h() * g.h();
    for (int j = 0; j < l; ++j) {
        for (int i = 0; i < l; ++i) {
            const Box cell = g.cell_box(i, j);
            const BoxSide side = shape.classify(cell);
            double v;
            if (side == BoxSide::Inside)
                v = 1.0;
            else if (side == BoxSide::Outside)
                v = 0.0;
            else
                v = shape.coverage(cell, cell_tol) / cell.area();
            g.set(i, j, std::clamp(v, 0.0, 1.0));
        }
    }
    return g;
}

/// Default tolerance for the singular-cell test: rasterization is exact to
/// tolerance, so only genuine interior cuts survive.
inline constexpr double kSingularEps = 1e-12;

using SingularSet = std::vector<CellIndex>;

/// Cells with eps < a < 1 - eps, in row-major order (j outer, i inner).
inline SingularSet classify_singular(const CellGrid& g, double eps = kSingularEps) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("classify_singular: need 0 < eps < 0.5");
    SingularSet out;
    for (int j = 0; j < g.l(); ++j)
        for (int i = 0; i < g.l(); ++i) {
            const double a = g.at(i, j);
            if (a > eps && a < 1.0 - eps) out.push_back({i, j});
        }
    return out;
}

inline bool is_singular(const CellGrid& g, int i, int j, double eps = kSingularEps) {
    const double a = g.at(i, j);
    return a > eps && a < 1.0 - eps;
}

inline double total_mass(const CellGrid& g) {
    double s = 0.0;
    for (double v : g.data()) s += v;
    return s * g.h() * g.h();
}

}  // namespace subcell
