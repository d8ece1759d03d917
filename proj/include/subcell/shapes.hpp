#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "subcell/geom.hpp"

namespace subcell {

struct InvalidShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// Spatial subdivision of a polygon: each node stores the polygon clipped to its
// box, so coverage queries touch only a handful of local vertices.
struct PolyTree {
    struct Node {
        Box box;
        Poly piece;
        int child0 = -1;  // index into nodes; -1 = leaf
        int child1 = -1;
    };
    std::vector<Node> nodes;

    static constexpr std::size_t kLeafVertices = 48;
    static constexpr int kMaxDepth = 22;

    void build(const Poly& polygon, const Box& root_box) {
        nodes.clear();
        nodes.push_back({root_box, clip_polygon_box(polygon, root_box), -1, -1});
        split(0, 0);
    }

    void split(std::size_t idx, int depth) {
        if (nodes[idx].piece.size() <= kLeafVertices || depth >= kMaxDepth) return;
        const Box b = nodes[idx].box;
        Box left = b, right = b;
        if (b.width() >= b.height()) {
            const double xm = 0.5 * (b.x0 + b.x1);
            left.x1 = xm;
            right.x0 = xm;
        } else {
            const double ym = 0.5 * (b.y0 + b.y1);
            left.y1 = ym;
            right.y0 = ym;
        }
        const int c0 = static_cast<int>(nodes.size());
        nodes.push_back({left, clip_polygon_box(nodes[idx].piece, left), -1, -1});
        const int c1 = static_cast<int>(nodes.size());
        nodes.push_back({right, clip_polygon_box(nodes[idx].piece, right), -1, -1});
        nodes[idx].child0 = c0;
        nodes[idx].child1 = c1;
        nodes[idx].piece.clear();
        nodes[idx].piece.shrink_to_fit();
        split(static_cast<std::size_t>(c0), depth + 1);
        split(static_cast<std::size_t>(c1), depth + 1);
    }

    static bool box_in_box(const Box& inner, const Box& outer) {
        return inner.x0 >= outer.x0 && inner.x1 <= outer.x1 && inner.y0 >= outer.y0 && inner.y1 <= outer.y1;
    }

    // Deepest stored piece whose box contains the query box. Queries straddling
    // a split line fall back to the full polygon; they are rare (one grid line
    // per tree level) and still exact.
    const Poly& local_piece(const Box& q) const {
        std::size_t idx = 0;
        while (nodes[idx].child0 >= 0) {
            const auto c0 = static_cast<std::size_t>(nodes[idx].child0);
            const auto c1 = static_cast<std::size_t>(nodes[idx].child1);
            if (box_in_box(q, nodes[c0].box))
                idx = c0;
            else if (box_in_box(q, nodes[c1].box))
                idx = c1;
            else
                return full_;
        }
        return nodes[idx].piece;
    }

    Poly full_;  // original polygon
};

struct PolygonData {
    Poly vertices;
    PolyTree tree;
    Box bbox;
    double area = 0.0;
};

struct CircleData {
    Vec2 center;
    double radius = 0.0;
};

struct ShapeImpl;

struct DifferenceData {
    std::shared_ptr<const ShapeImpl> a;
    std::shared_ptr<const ShapeImpl> b;
};

struct ShapeImpl {
    std::variant<CircleData, PolygonData, DifferenceData> data;
};

}  // namespace detail

/// Ground-truth domain Omega. Immutable and cheap to copy.
/// Variants: Circle, Polygon (CCW vertex loop), PolarFourier (realized as a fine
/// polygon), Difference(A, B) for Zalesak-style constructions.
class Shape {
  public:
    static Shape circle(Vec2 center, double radius) {
        if (!(radius > 0.0)) throw InvalidShapeError("circle: radius must be positive");
        auto impl = std::make_shared<detail::ShapeImpl>();
        impl->data = detail::CircleData{center, radius};
        return Shape(std::move(impl));
    }

    static Shape polygon(Poly vertices) {
        if (vertices.size() < 3) throw InvalidShapeError("polygon: needs at least 3 vertices");
        if (polygon_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
        auto impl = std::make_shared<detail::ShapeImpl>();
        detail::PolygonData pd;
        pd.vertices = std::move(vertices);
        double x0 = pd.vertices[0].x, x1 = x0, y0 = pd.vertices[0].y, y1 = y0;
        for (const auto& v : pd.vertices) {
            x0 = std::min(x0, v.x);
            x1 = std::max(x1, v.x);
            y0 = std::min(y0, v.y);
            y1 = std::max(y1, v.y);
        }
        const double pad = 1e-9 * (1.0 + std::max(x1 - x0, y1 - y0));
        pd.bbox = Box(x0 - pad, y0 - pad, x1 + pad, y1 + pad);
        pd.area = polygon_area(pd.vertices);
        pd.tree.full_ = pd.vertices;
        pd.tree.build(pd.vertices, pd.bbox);
        impl->data = std::move(pd);
        return Shape(std::move(impl));
    }

    /// Smooth star-shaped blob r(phi) = r0 + sum_m (ac[m] cos((m+1)phi) + as[m] sin((m+1)phi)),
    /// realized as an n_vertices polygon. n_vertices controls the geometric fidelity.
    static Shape polar_fourier(Vec2 center, double r0, const std::vector<double>& ac,
                               const std::vector<double>& as, int n_vertices = 16384) {
        if (!(r0 > 0.0)) throw InvalidShapeError("polar_fourier: r0 must be positive");
        double slack = 0.0;
        for (double v : ac) slack += std::abs(v);
        for (double v : as) slack += std::abs(v);
        if (slack >= r0) throw InvalidShapeError("polar_fourier: radius function may vanish");
        Poly verts;
        verts.reserve(static_cast<std::size_t>(n_vertices));
        for (int k = 0; k < n_vertices; ++k) {
            const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n_vertices);
            double r = r0;
            for (std::size_t m = 0; m < ac.size(); ++m) r += ac[m] * std::cos(static_cast<double>(m + 1) * phi);
            for (std::size_t m = 0; m < as.size(); ++m) r += as[m] * std::sin(static_cast<double>(m + 1) * phi);
            verts.push_back({center.x + r * std::cos(phi), center.y + r * std::sin(phi)});
        }
        return polygon(std::move(verts));
    }

    static Shape difference(const Shape& a, const Shape& b) {
        auto impl = std::make_shared<detail::ShapeImpl>();
        impl->data = detail::DifferenceData{a.impl_, b.impl_};
        return Shape(std::move(impl));
    }

    bool contains(const Vec2& z) const { return contains_impl(*impl_, z); }

    BoxSide classify(const Box& box) const { return classify_impl(*impl_, box); }

    /// Area of box ∩ Omega. Exact for circles and polygons; differences recurse
    /// near the crossing of the two boundaries down to `tol` residual area.
    double coverage(const Box& box, double tol = 1e-14) const { return coverage_impl(*impl_, box, tol); }

    double area() const { return area_impl(*impl_); }

    Box bounding_box() const { return bbox_impl(*impl_); }

    Shape translated(const Vec2& d) const { return Shape(translate_impl(*impl_, d)); }

    /// Interface polyline(s) for plotting.
    std::vector<Poly> boundary(int samples_per_arc = 256) const { return boundary_impl(*impl_, samples_per_arc); }

  private:
    explicit Shape(std::shared_ptr<const detail::ShapeImpl> impl) : impl_(std::move(impl)) {}

    static bool contains_impl(const detail::ShapeImpl& s, const Vec2& z) {
        if (const auto* c = std::get_if<detail::CircleData>(&s.data)) {
            const Vec2 d = z - c->center;
            return dot(d, d) <= c->radius * c->radius;
        }
        if (const auto* p = std::get_if<detail::PolygonData>(&s.data)) {
            if (!p->bbox.contains(z)) return false;
            return point_in_polygon(p->vertices, z);
        }
        const auto& d = std::get<detail::DifferenceData>(s.data);
        return contains_impl(*d.a, z) && !contains_impl(*d.b, z);
    }

    static BoxSide classify_impl(const detail::ShapeImpl& s, const Box& box) {
        if (const auto* c = std::get_if<detail::CircleData>(&s.data)) return circle_box_side(c->center, c->radius, box);
        if (const auto* p = std::get_if<detail::PolygonData>(&s.data)) {
            if (box.x1 <= p->bbox.x0 || box.x0 >= p->bbox.x1 || box.y1 <= p->bbox.y0 || box.y0 >= p->bbox.y1)
                return BoxSide::Outside;
            const double a = polygon_coverage(*p, box);
            const double full = box.area();
            if (a <= 1e-12 * full) return a == 0.0 ? BoxSide::Outside : BoxSide::Straddle;
            if (a >= (1.0 - 1e-12) * full) return BoxSide::Inside;
            return BoxSide::Straddle;
        }
        const auto& d = std::get<detail::DifferenceData>(s.data);
        const BoxSide ca = classify_impl(*d.a, box);
        const BoxSide cb = classify_impl(*d.b, box);
        if (ca == BoxSide::Outside || cb == BoxSide::Inside) return BoxSide::Outside;
        if (ca == BoxSide::Inside && cb == BoxSide::Outside) return BoxSide::Inside;
        return BoxSide::Straddle;
    }

    static double polygon_coverage(const detail::PolygonData& p, const Box& box) {
        const Poly& piece = p.tree.local_piece(box);
        if (piece.empty()) return 0.0;
        const Poly clipped = clip_polygon_box(piece, box);
        return clipped.empty() ? 0.0 : std::abs(polygon_area(clipped));
    }

    static double coverage_impl(const detail::ShapeImpl& s, const Box& box, double tol) {
        if (const auto* c = std::get_if<detail::CircleData>(&s.data)) return circle_box_area(c->center, c->radius, box);
        if (const auto* p = std::get_if<detail::PolygonData>(&s.data)) {
            if (box.x1 <= p->bbox.x0 || box.x0 >= p->bbox.x1 || box.y1 <= p->bbox.y0 || box.y0 >= p->bbox.y1)
                return 0.0;
            return polygon_coverage(*p, box);
        }
        const auto& d = std::get<detail::DifferenceData>(s.data);
        return coverage_impl(*d.a, box, tol) - meet_area(*d.a, *d.b, box, tol);
    }

    // area of box ∩ A ∩ B by recursion; exact leaves once either operand is
    // uniform over the box, subdivision only near boundary crossings
    static double meet_area(const detail::ShapeImpl& a, const detail::ShapeImpl& b, const Box& box, double tol) {
        const BoxSide ca = classify_impl(a, box);
        if (ca == BoxSide::Outside) return 0.0;
        const BoxSide cb = classify_impl(b, box);
        if (cb == BoxSide::Outside) return 0.0;
        if (ca == BoxSide::Inside) return coverage_impl(b, box, tol);
        if (cb == BoxSide::Inside) return coverage_impl(a, box, tol);
        if (box.area() <= 2.0 * tol) return 0.5 * box.area();
        const double half = 0.5 * tol;
        Box b0 = box, b1 = box;
        if (box.width() >= box.height()) {
            const double xm = 0.5 * (box.x0 + box.x1);
            b0.x1 = xm;
            b1.x0 = xm;
        } else {
            const double ym = 0.5 * (box.y0 + box.y1);
            b0.y1 = ym;
            b1.y0 = ym;
        }
        return meet_area(a, b, b0, half) + meet_area(a, b, b1, half);
    }

    static double area_impl(const detail::ShapeImpl& s) {
        if (const auto* c = std::get_if<detail::CircleData>(&s.data)) return kPi * c->radius * c->radius;
        if (const auto* p = std::get_if<detail::PolygonData>(&s.data)) return p->area;
        const auto& d = std::get<detail::DifferenceData>(s.data);
        return area_impl(*d.a) - meet_area(*d.a, *d.b, bbox_impl(*d.a), 1e-14);
    }

    static Box bbox_impl(const detail::ShapeImpl& s) {
        if (const auto* c = std::get_if<detail::CircleData>(&s.data))
            return Box(c->center.x - c->radius, c->center.y - c->radius, c->center.x + c->radius,
                       c->center.y + c->radius);
        if (const auto* p = std::get_if<detail::PolygonData>(&s.data)) return p->bbox;
        return bbox_impl(*std::get<detail::DifferenceData>(s.data).a);
    }

    static std::shared_ptr<const detail::ShapeImpl> translate_impl(const detail::ShapeImpl& s, const Vec2& d) {
        if (const auto* c = std::get_if<detail::CircleData>(&s.data)) {
            auto impl = std::make_shared<detail::ShapeImpl>();
            impl->data = detail::CircleData{c->center + d, c->radius};
            return impl;
        }
        if (const auto* p = std::get_if<detail::PolygonData>(&s.data)) {
            Poly moved = p->vertices;
            for (auto& v : moved) v = v + d;
            return polygon(std::move(moved)).impl_;
        }
        const auto& df = std::get<detail::DifferenceData>(s.data);
        auto impl = std::make_shared<detail::ShapeImpl>();
        impl->data = detail::DifferenceData{translate_impl(*df.a, d), translate_impl(*df.b, d)};
        return impl;
    }

    static std::vector<Poly> boundary_impl(const detail::ShapeImpl& s, int n) {
        if (const auto* c = std::get_if<detail::CircleData>(&s.data)) {
            Poly ring;
            ring.reserve(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) {
                const double phi = 2.0 * kPi * k / n;
                ring.push_back({c->center.x + c->radius * std::cos(phi), c->center.y + c->radius * std::sin(phi)});
            }
            return {ring};
        }
        if (const auto* p = std::get_if<detail::PolygonData>(&s.data)) return {p->vertices};
        const auto& d = std::get<detail::DifferenceData>(s.data);
        auto out = boundary_impl(*d.a, n);
        auto more = boundary_impl(*d.b, n);
        out.insert(out.end(), more.begin(), more.end());
        return out;
    }

    std::shared_ptr<const detail::ShapeImpl> impl_;
};

}  // namespace subcell
