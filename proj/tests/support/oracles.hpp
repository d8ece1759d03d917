#pragma once

// Test-only oracles, deliberately independent of the library's exact kernels:
// they rely only on pointwise membership tests and 1d quadrature.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "subcell/geom.hpp"

namespace oracles {

using subcell::Box;
using subcell::Vec2;

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int max_depth = 30) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int depth) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lmid = 0.5 * (lo + mid);
        const double rmid = 0.5 * (mid + hi);
        const double flm = f(lmid);
        const double frm = f(rmid);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, depth - 1) + rec(mid, hi, fmid, frm, fhi, right, depth - 1);
    };
    const double mid = 0.5 * (a + b);
    const double fa = f(a), fm = f(mid), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, max_depth);
}

/// Length of {y in [y0,y1] : inside(x,y)} found by scanning for sign flips and
/// bisecting each one. Works for any region whose vertical slices are unions
/// of at most a few intervals.
inline double slice_length(const std::function<bool(double, double)>& inside, double x, double y0, double y1,
                           int scan = 512) {
    std::vector<double> cuts{y0};
    bool prev = inside(x, y0);
    std::vector<bool> states{prev};
    for (int k = 1; k <= scan; ++k) {
        const double y = y0 + (y1 - y0) * k / scan;
        const bool cur = inside(x, y);
        if (cur != prev) {
            double lo = y0 + (y1 - y0) * (k - 1) / scan;
            double hi = y;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (inside(x, mid) == prev)
                    lo = mid;
                else
                    hi = mid;
            }
            cuts.push_back(0.5 * (lo + hi));
            states.push_back(cur);
            prev = cur;
        }
    }
    cuts.push_back(y1);
    double len = 0.0;
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg)
        if (states[seg]) len += cuts[seg + 1] - cuts[seg];
    return len;
}

/// Area fraction of {inside} within a box via 1d slices + adaptive Simpson.
/// Independent oracle for every exact cell-average kernel in the library.
inline double box_fraction(const std::function<bool(double, double)>& inside, const Box& box, double tol = 1e-10) {
    const double area = adaptive_simpson(
        [&](double x) { return slice_length(inside, x, box.y0, box.y1); }, box.x0, box.x1, tol * box.area());
    return area / box.area();
}

/// Plain fixed-seed Monte Carlo area of {inside} within a box.
inline double mc_area(const std::function<bool(double, double)>& inside, const Box& box, std::size_t n,
                      std::uint64_t seed = 12345) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box.x0, box.x1);
    std::uniform_real_distribution<double> uy(box.y0, box.y1);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = ux(rng);
        const double y = uy(rng);
        if (inside(x, y)) ++hits;
    }
    return box.area() * static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace oracles
