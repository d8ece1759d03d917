#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "subcell/grid.hpp"
#include "subcell/models.hpp"
#include "subcell/obera.hpp"
#include "subcell/orient.hpp"

namespace subcell {

/// Per-column data of an oriented stencil. Columns are indexed by their offset
/// d = -k_minus..k_plus from the anchor along the graph axis; sums[d+k_minus]
/// is the plain sum of cell averages down the column. In anchor-centered units
/// the column integral mean of the interface graph is sums[i] + hat_base.
struct ColumnData {
    std::vector<double> sums;
    int k_minus = 0;
    int k_plus = 0;
    double hat_base = 0.0;
    double base_elevation = 0.0;  // b_T in world units (oriented frame)
    double h = 0.0;

    /// Column average a_i in the paper's normalization: h * (sum over column).
    double a(int idx) const { return h * sums[static_cast<std::size_t>(idx)]; }
    /// Column integral mean of the graph in anchor-centered units.
    double mean_hat(int idx) const { return sums[static_cast<std::size_t>(idx)] + hat_base; }
};

/// Column sums over an adaptive stencil with clean bounding rows.
inline ColumnData column_averages(const CellGrid& g, const Stencil& st) {
    const OrientedFrame f{st.orient};
    const auto [s0, t0] = f.st_of(st.anchor.i, st.anchor.j);
    ColumnData cd;
    cd.k_minus = st.k_minus;
    cd.k_plus = st.k_plus;
    cd.hat_base = st.hat_base();
    cd.base_elevation = st.base_elevation(g.h());
    cd.h = g.h();
    cd.sums.reserve(static_cast<std::size_t>(st.width()));
    for (int d = -st.k_minus; d <= st.k_plus; ++d) {
        double sum = 0.0;
        for (int t = t0 - st.l_minus; t <= t0 + st.l_plus; ++t) {
            const CellIndex c = f.cell_of(s0 + d, t);
            sum += g.at(c.i, c.j);
        }
        cd.sums.push_back(sum);
    }
    return cd;
}

namespace detail {

// dense Gaussian elimination with partial pivoting, n <= 8
inline void solve_dense(std::vector<double>& A, std::vector<double>& rhs, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row)
            if (std::abs(A[row * n + col]) > std::abs(A[piv * n + col])) piv = row;
        if (std::abs(A[piv * n + col]) < 1e-300) throw std::runtime_error("average interpolant: singular system");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
            std::swap(rhs[col], rhs[piv]);
        }
        for (int row = col + 1; row < n; ++row) {
            const double m = A[row * n + col] / A[col * n + col];
            for (int c = col; c < n; ++c) A[row * n + c] -= m * A[col * n + c];
            rhs[row] -= m * rhs[col];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        double s = rhs[row];
        for (int c = row + 1; c < n; ++c) s -= A[row * n + c] * rhs[c];
        rhs[row] = s / A[row * n + row];
    }
}

}  // namespace detail

/// Unique polynomial of degree width-1 whose column averages match the data.
/// Solved on the monomial basis in anchor-centered units, where the system is
/// h-independent. Column d covers [d - 1/2, d + 1/2].
inline Polynomial average_interpolant(const ColumnData& cd) {
    const int n = static_cast<int>(cd.sums.size());
    std::vector<double> A(static_cast<std::size_t>(n) * n);
    std::vector<double> rhs(static_cast<std::size_t>(n));
    for (int row = 0; row < n; ++row) {
        const double d = static_cast<double>(row - cd.k_minus);
        const double lo = d - 0.5, hi = d + 0.5;
        double plo = lo, phi = hi;
        for (int col = 0; col < n; ++col) {
            A[row * n + col] = (phi - plo) / static_cast<double>(col + 1);
            plo *= lo;
            phi *= hi;
        }
        rhs[row] = cd.mean_hat(row);
    }
    detail::solve_dense(A, rhs, n);
    return Polynomial(std::move(rhs));
}

struct AerosDiagnostics {
    bool confined = false;
    Orientation orient = Orientation::YLeq;
    int k_minus = 0, k_plus = 0, l_minus = 0, l_plus = 0;
};

struct AerosResult {
    InterfaceModel model;
    Stencil stencil;
    AerosDiagnostics diag;
};

/// Full AEROS pipeline: Sobel gradient, orientation, adaptive oriented stencil,
/// column averages, interpolant. Returns nothing on confinement failure.
inline std::optional<AerosResult> aeros_fit(const CellGrid& g, CellIndex cell, int k, double eps = kSingularEps) {
    const Orientation orient = select_orientation(sobel(g, cell.i, cell.j));
    const std::optional<Stencil> st = adaptive_stencil(g, cell, orient, k, eps);
    if (!st) {
        return std::nullopt;
    }
    const ColumnData cd = column_averages(g, *st);
    const Polynomial p_frame = average_interpolant(cd);
    const Vec2 zc = g.cell_center(cell.i, cell.j);
    AerosResult out{InterfaceModel{model_from_frame_poly(orient, zc, g.h(), p_frame)}, *st,
                    AerosDiagnostics{true, orient, st->k_minus, st->k_plus, st->l_minus, st->l_plus}};
    return out;
}

}  // namespace subcell
