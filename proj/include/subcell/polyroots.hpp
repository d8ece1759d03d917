#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace subcell {

/// Dense univariate polynomial, coefficients in ascending order: c[0] + c[1] x + ...
/// Degree is capped at 4 everywhere in this library.
struct Polynomial {
    std::vector<double> c;

    Polynomial() : c{0.0} {}
    explicit Polynomial(std::vector<double> coeffs) : c(std::move(coeffs)) {
        if (c.empty()) c.push_back(0.0);
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }

    double eval(double x) const {
        double r = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
        return r;
    }

    Polynomial derivative() const {
        if (c.size() <= 1) return Polynomial();
        std::vector<double> d(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
        return Polynomial(std::move(d));
    }

    /// Antiderivative with zero constant term.
    Polynomial antiderivative() const {
        std::vector<double> a(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
        return Polynomial(std::move(a));
    }

    double integral(double a, double b) const {
        const Polynomial F = antiderivative();
        return F.eval(b) - F.eval(a);
    }

    Polynomial shifted(double dc) const {
        Polynomial p = *this;
        p.c[0] += dc;
        return p;
    }

    /// Drop near-zero leading coefficients (degree reduction for degenerate input).
    Polynomial reduced() const {
        Polynomial p = *this;
        double scale = 0.0;
        for (double v : p.c) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) return Polynomial();
        while (p.c.size() > 1 && std::abs(p.c.back()) <= 1e-14 * scale) p.c.pop_back();
        return p;
    }
};

namespace detail {

inline double bisect_root(const Polynomial& p, double a, double b, double fa) {
    // sign-change bisection followed by a Newton polish
    for (int it = 0; it < 120 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = p.eval(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    double x = 0.5 * (a + b);
    const Polynomial d = p.derivative();
    for (int it = 0; it < 3; ++it) {
        const double fx = p.eval(x);
        const double dx = d.eval(x);
        if (dx == 0.0) break;
        const double step = fx / dx;
        const double nx = x - step;
        if (nx < a || nx > b) break;
        x = nx;
    }
    return x;
}

}  // namespace detail

/// All real roots of p in [a, b], ascending, deduplicated. Monotone brackets are
/// obtained from the critical points of p (roots of p', found recursively), then
/// each bracket with a sign change is resolved by bisection.
inline std::vector<double> real_roots_in(const Polynomial& poly, double a, double b) {
    std::vector<double> roots;
    if (!(a < b)) return roots;
    const Polynomial p = poly.reduced();
    const int deg = p.degree();
    if (deg == 0) return roots;  // constant: no isolated roots (identically zero treated as none)
    if (deg == 1) {
        const double r = -p.c[0] / p.c[1];
        if (r >= a && r <= b) roots.push_back(r);
        return roots;
    }
    std::vector<double> knots = real_roots_in(p.derivative(), a, b);
    knots.insert(knots.begin(), a);
    knots.push_back(b);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double u = knots[i];
        const double v = knots[i + 1];
        if (v <= u) continue;
        const double fu = p.eval(u);
        const double fv = p.eval(v);
        if (fu == 0.0) roots.push_back(u);
        if ((fu < 0.0 && fv > 0.0) || (fu > 0.0 && fv < 0.0))
            roots.push_back(detail::bisect_root(p, u, v, fu));
    }
    if (p.eval(b) == 0.0) roots.push_back(b);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double u, double v) { return std::abs(u - v) <= 1e-13 * (1.0 + std::abs(u)); }),
                roots.end());
    return roots;
}

/// Exact integral over [a,b] of clamp(p(x), lo, hi). Crossing points of the two
/// levels are isolated first; between crossings the integrand is p itself or a
/// constant level, both with closed-form antiderivatives.
inline double integrate_clamped(const Polynomial& p, double a, double b, double lo, double hi) {
    if (!(a < b)) return 0.0;
    if (!(lo <= hi)) throw std::invalid_argument("integrate_clamped: lo > hi");
    std::vector<double> cuts{a, b};
    for (double level : {lo, hi}) {
        Polynomial q = p;
        q.c[0] -= level;
        for (double r : real_roots_in(q, a, b)) cuts.push_back(r);
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double u = cuts[i];
        const double v = cuts[i + 1];
        if (v <= u) continue;
        const double mid = p.eval(0.5 * (u + v));
        if (mid <= lo)
            total += lo * (v - u);
        else if (mid >= hi)
            total += hi * (v - u);
        else
            total += p.integral(u, v);
    }
    return total;
}

}  // namespace subcell
