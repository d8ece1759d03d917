#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "subcell/geom.hpp"
#include "support/oracles.hpp"

using namespace subcell;

TEST_CASE("halfplane box area: axis-aligned and oblique") {
    const Box cell(0.0, 0.0, 1.0, 1.0);
    // y <= 0.5 on the unit square
    CHECK(halfplane_box_area({0.0, 0.5}, {0.0, 1.0}, cell) == Catch::Approx(0.5).margin(1e-15));
    // x <= 0.25
    CHECK(halfplane_box_area({0.25, 0.0}, {1.0, 0.0}, cell) == Catch::Approx(0.25).margin(1e-15));
    // diagonal y <= x: half the square
    const Vec2 n{-std::sqrt(0.5), std::sqrt(0.5)};
    CHECK(halfplane_box_area({0.0, 0.0}, n, cell) == Catch::Approx(0.5).margin(1e-14));
    // corner cut: y <= -x + 0.5 keeps the triangle of area 1/8
    const Vec2 n2{std::sqrt(0.5), std::sqrt(0.5)};
    CHECK(halfplane_box_area({0.5, 0.0}, n2, cell) == Catch::Approx(0.125).margin(1e-14));
}

TEST_CASE("halfplane box area agrees with the slice oracle on random data") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
        const double theta = 2.0 * kPi * u(rng);
        const Vec2 n{-std::sin(theta), std::cos(theta)};
        const Vec2 p0{u(rng), u(rng)};
        const Box box(0.2, 0.3, 1.1, 0.9);
        const double got = halfplane_box_area(p0, n, box);
        const double want =
            box.area() * oracles::box_fraction([&](double x, double y) { return dot(Vec2{x, y} - p0, n) <= 0.0; }, box,
                                               1e-9);
        CHECK(got == Catch::Approx(want).margin(5e-9));
    }
}

TEST_CASE("circle box area identities") {
    // whole disc inside the box
    CHECK(circle_box_area({0.5, 0.5}, 0.25, Box(0, 0, 1, 1)) == Catch::Approx(kPi * 0.0625).epsilon(1e-13));
    // quarter disc
    CHECK(circle_box_area({0.0, 0.0}, 1.0, Box(0, 0, 1, 1)) == Catch::Approx(kPi / 4.0).epsilon(1e-13));
    // box fully inside the disc
    CHECK(circle_box_area({0.5, 0.5}, 2.0, Box(0, 0, 1, 1)) == Catch::Approx(1.0).epsilon(1e-14));
    // disjoint
    CHECK(circle_box_area({3.0, 3.0}, 0.5, Box(0, 0, 1, 1)) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("circle box area agrees with the slice oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 25; ++rep) {
        const Vec2 c{u(rng) * 2.0 - 0.5, u(rng) * 2.0 - 0.5};
        const double r = 0.1 + u(rng);
        const Box box(0.0, 0.0, 1.0, 1.0);
        const double got = circle_box_area(c, r, box);
        const double want = box.area() * oracles::box_fraction(
                                             [&](double x, double y) {
                                                 const double dx = x - c.x, dy = y - c.y;
                                                 return dx * dx + dy * dy <= r * r;
                                             },
                                             box, 1e-9);
        CHECK(got == Catch::Approx(want).margin(5e-9));
    }
}

TEST_CASE("polygon clipping and area") {
    const Poly tri{{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}};
    CHECK(polygon_area(tri) == Catch::Approx(2.0));
    const Poly clipped = clip_polygon_box(tri, Box(0, 0, 1, 1));
    CHECK(std::abs(polygon_area(clipped)) == Catch::Approx(0.875));  // unit square minus corner triangle
    CHECK(point_in_polygon(tri, {0.3, 0.3}));
    CHECK_FALSE(point_in_polygon(tri, {1.5, 1.5}));
}

TEST_CASE("box side classification is conservative and exact on uniform boxes") {
    const Vec2 n{0.0, 1.0};
    CHECK(halfplane_box_side({0.0, 2.0}, n, Box(0, 0, 1, 1)) == BoxSide::Inside);
    CHECK(halfplane_box_side({0.0, -1.0}, n, Box(0, 0, 1, 1)) == BoxSide::Outside);
    CHECK(halfplane_box_side({0.0, 0.5}, n, Box(0, 0, 1, 1)) == BoxSide::Straddle);
    CHECK(circle_box_side({0.5, 0.5}, 3.0, Box(0, 0, 1, 1)) == BoxSide::Inside);
    CHECK(circle_box_side({5.0, 5.0}, 1.0, Box(0, 0, 1, 1)) == BoxSide::Outside);
    CHECK(circle_box_side({0.5, 0.5}, 0.4, Box(0, 0, 1, 1)) == BoxSide::Straddle);
}
