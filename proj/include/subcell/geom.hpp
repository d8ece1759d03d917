#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace subcell {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

/// Axis-aligned box [x0,x1] x [y0,y1].
struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    Box() = default;
    Box(double x0_, double y0_, double x1_, double y1_) : x0(x0_), y0(y0_), x1(x1_), y1(y1_) {}

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    Vec2 corner(int k) const {
        switch (k & 3) {
            case 0: return {x0, y0};
            case 1: return {x1, y0};
            case 2: return {x1, y1};
            default: return {x0, y1};
        }
    }
    bool contains(const Vec2& p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

/// Region-vs-box classification used throughout the exact quadrature code.
enum class BoxSide { Inside, Outside, Straddle };

// ---------------------------------------------------------------------------
// Polygons (vertex loops, even-odd semantics). Clipping a simple polygon by a
// box with Sutherland-Hodgman may leave zero-width bridges for non-convex
// inputs; signed areas and even-odd point tests are unaffected.
// ---------------------------------------------------------------------------

using Poly = std::vector<Vec2>;

inline double polygon_area(const Poly& p) {
    double a = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& u = p[i];
        const Vec2& v = p[(i + 1) % n];
        a += cross(u, v);
    }
    return 0.5 * a;
}

inline bool point_in_polygon(const Poly& p, const Vec2& z) {
    // even-odd ray cast along +x
    bool in = false;
    const std::size_t n = p.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = p[i];
        const Vec2& b = p[j];
        if ((a.y > z.y) != (b.y > z.y)) {
            const double xi = a.x + (z.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (z.x < xi) in = !in;
        }
    }
    return in;
}

namespace detail {

// Clip polygon against half-plane keep(v) >= 0, boundary at keep(v) == 0.
template <class KeepFn, class LerpFn>
inline Poly clip_half(const Poly& in, KeepFn keep, LerpFn intersect) {
    Poly out;
    const std::size_t n = in.size();
    if (n == 0) return out;
    out.reserve(n + 4);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& cur = in[i];
        const Vec2& nxt = in[(i + 1) % n];
        const double kc = keep(cur);
        const double kn = keep(nxt);
        if (kc >= 0.0) {
            out.push_back(cur);
            if (kn < 0.0) out.push_back(intersect(cur, nxt, kc, kn));
        } else if (kn >= 0.0) {
            out.push_back(intersect(cur, nxt, kc, kn));
        }
    }
    return out;
}

inline Vec2 lerp_at(const Vec2& a, const Vec2& b, double ka, double kb) {
    const double t = ka / (ka - kb);
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

}  // namespace detail

/// Sutherland-Hodgman clip of a polygon to an axis-aligned box.
inline Poly clip_polygon_box(const Poly& p, const Box& b) {
    using detail::clip_half;
    using detail::lerp_at;
    Poly q = clip_half(p, [&](const Vec2& v) { return v.x - b.x0; }, lerp_at);
    q = clip_half(q, [&](const Vec2& v) { return b.x1 - v.x; }, lerp_at);
    q = clip_half(q, [&](const Vec2& v) { return v.y - b.y0; }, lerp_at);
    q = clip_half(q, [&](const Vec2& v) { return b.y1 - v.y; }, lerp_at);
    return q;
}

/// Clip polygon to half-plane dot(z - p0, n) <= 0.
inline Poly clip_polygon_halfplane(const Poly& poly, const Vec2& p0, const Vec2& n) {
    return detail::clip_half(
        poly, [&](const Vec2& v) { return -(n.x * (v.x - p0.x) + n.y * (v.y - p0.y)); },
        detail::lerp_at);
}

inline Poly box_polygon(const Box& b) { return Poly{b.corner(0), b.corner(1), b.corner(2), b.corner(3)}; }

// ---------------------------------------------------------------------------
// Exact area of {y <= a + b*x} intersected with the unit square [0,1]^2.
// Breakpoints where the line leaves [0,1] are handled piecewise.
// ---------------------------------------------------------------------------
inline double unit_square_below_line(double a, double b) {
    auto seg = [&](double u0, double u1) {
        if (u1 <= u0) return 0.0;
        const double m0 = a + b * u0;
        const double m1 = a + b * u1;
        const double lo = std::min(m0, m1);
        const double hi = std::max(m0, m1);
        if (hi <= 0.0) return 0.0;
        if (lo >= 1.0) return u1 - u0;
        return 0.5 * (m0 + m1) * (u1 - u0);  // strictly inside (0,1) on this piece
    };
    if (b == 0.0) return std::clamp(a, 0.0, 1.0);
    double t0 = (0.0 - a) / b;  // crosses y=0
    double t1 = (1.0 - a) / b;  // crosses y=1
    if (t0 > t1) std::swap(t0, t1);
    t0 = std::clamp(t0, 0.0, 1.0);
    t1 = std::clamp(t1, 0.0, 1.0);
    return seg(0.0, t0) + seg(t0, t1) + seg(t1, 1.0);
}

/// Exact area of the half-plane {dot(z - p0, n) <= 0} intersected with box.
inline double halfplane_box_area(const Vec2& p0, const Vec2& n, const Box& box) {
    const double w = box.width();
    const double ht = box.height();
    if (w <= 0.0 || ht <= 0.0) return 0.0;
    const double c = n.x * p0.x + n.y * p0.y;  // inside: n.x or= x + n.y*y <= c
    if (n.y == 0.0) {
        if (n.x == 0.0) return 0.0;  // degenerate normal: empty by convention
        // inside: x <= c/n.x  (n.x>0)  or  x >= c/n.x (n.x<0)
        const double xs = c / n.x;
        double f = (xs - box.x0) / w;
        f = std::clamp(f, 0.0, 1.0);
        if (n.x < 0.0) f = 1.0 - f;
        return f * box.area();
    }
    // inside in unit coordinates u,v: v <= A + B u (n.y>0), v >= A + B u (n.y<0)
    const double A = (c - n.x * box.x0 - n.y * box.y0) / (n.y * ht);
    const double B = -n.x * w / (n.y * ht);
    const double frac = unit_square_below_line(A, B);
    return box.area() * (n.y > 0.0 ? frac : 1.0 - frac);
}

// ---------------------------------------------------------------------------
// Exact area of a disc intersected with a box, by integrating circle segments.
// ---------------------------------------------------------------------------
namespace detail {

// positive half-width of the chord of the unit-origin circle radius r at height y
inline double chord_halfwidth(double y, double r) { return (y < r) ? std::sqrt(r * r - y * y) : 0.0; }

// antiderivative of (sqrt(r^2-x^2) - y0) on [-s, s]
inline double circ_anti(double x, double y0, double r) {
    const double t = std::clamp(x / r, -1.0, 1.0);
    return 0.5 * (x * r * std::sqrt(std::max(0.0, 1.0 - t * t)) + r * r * std::asin(t) - 2.0 * y0 * x);
}

// area of {x in [x0,x1], y >= y0, inside circle radius r centered at origin}, y0 >= 0
inline double circ_strip_above(double x0, double x1, double y0, double r) {
    if (x0 > x1) std::swap(x0, x1);
    const double s = chord_halfwidth(y0, r);
    const double a = std::clamp(x0, -s, s);
    const double b = std::clamp(x1, -s, s);
    return circ_anti(b, y0, r) - circ_anti(a, y0, r);
}

// area of circle (origin, r) within [x0,x1] x [y0,y1], any signs
inline double circ_box(double x0, double x1, double y0, double y1, double r) {
    if (y0 > y1) std::swap(y0, y1);
    if (y1 <= 0.0) return circ_box(x0, x1, -y1, -y0, r);
    if (y0 < 0.0) return circ_box(x0, x1, 0.0, -y0, r) + circ_box(x0, x1, 0.0, y1, r);
    return circ_strip_above(x0, x1, y0, r) - circ_strip_above(x0, x1, y1, r);
}

}  // namespace detail

inline double circle_box_area(const Vec2& center, double r, const Box& box) {
    if (r <= 0.0) return 0.0;
    return detail::circ_box(box.x0 - center.x, box.x1 - center.x, box.y0 - center.y, box.y1 - center.y, r);
}

/// Conservative classification of a box against a disc boundary.
inline BoxSide circle_box_side(const Vec2& center, double r, const Box& box) {
    const double dx = std::max({box.x0 - center.x, 0.0, center.x - box.x1});
    const double dy = std::max({box.y0 - center.y, 0.0, center.y - box.y1});
    const double dmin = std::hypot(dx, dy);
    if (dmin >= r) return BoxSide::Outside;
    const double fx = std::max(center.x - box.x0, box.x1 - center.x);
    const double fy = std::max(center.y - box.y0, box.y1 - center.y);
    const double dmax = std::hypot(fx, fy);
    if (dmax <= r) return BoxSide::Inside;
    return BoxSide::Straddle;
}

inline BoxSide halfplane_box_side(const Vec2& p0, const Vec2& n, const Box& box) {
    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double d = dot(box.corner(k) - p0, n);
        if (k == 0) {
            lo = hi = d;
        } else {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    if (hi <= 0.0) return BoxSide::Inside;
    if (lo >= 0.0) return BoxSide::Outside;
    return BoxSide::Straddle;
}

}  // namespace subcell
