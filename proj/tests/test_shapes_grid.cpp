#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "subcell/grid.hpp"
#include "subcell/shapes.hpp"
#include "support/oracles.hpp"

using namespace subcell;

namespace {

Shape half_plane_below(double y0) {
    // realized as a large rectangle so every shape path is exercised
    return Shape::polygon({{-2.0, -2.0}, {3.0, -2.0}, {3.0, y0}, {-2.0, y0}});
}

}  // namespace

TEST_CASE("rasterize: single-cell circle area identity") {
    const double r = 0.5 / std::sqrt(kPi);  // disc of area 0.25
    const CellGrid g = rasterize(Shape::circle({0.5, 0.5}, r), 1);
    CHECK(g.at(0, 0) == Catch::Approx(0.25).margin(1e-13));
}

TEST_CASE("rasterize: half-plane rows at l = 2") {
    const CellGrid g = rasterize(half_plane_below(0.5), 2);
    CHECK(g.at(0, 0) == Catch::Approx(1.0).margin(1e-13));
    CHECK(g.at(1, 0) == Catch::Approx(1.0).margin(1e-13));
    CHECK(g.at(0, 1) == Catch::Approx(0.0).margin(1e-13));
    CHECK(g.at(1, 1) == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("rasterize: mass of a circle matches the quadrature oracle") {
    const Shape c = Shape::circle({0.5, 0.5}, 0.25);
    const CellGrid g = rasterize(c, 10, 1e-13);
    const double mass = total_mass(g);
    CHECK(mass == Catch::Approx(kPi * 0.0625).margin(1e-12));
    const double oracle = oracles::box_fraction(
        [&](double x, double y) { return c.contains({x, y}); }, Box(0, 0, 1, 1), 1e-9);
    CHECK(mass == Catch::Approx(oracle).margin(5e-9));
}

TEST_CASE("rasterize rejects degenerate shapes") {
    CHECK_THROWS_AS(Shape::circle({0.5, 0.5}, 0.0), InvalidShapeError);
    CHECK_THROWS_AS(Shape::circle({0.5, 0.5}, -1.0), InvalidShapeError);
    CHECK_THROWS_AS(Shape::polygon({{0, 0}, {1, 0}}), InvalidShapeError);
}

TEST_CASE("classify_singular basics") {
    CellGrid zeros(5, 0.0);
    CHECK(classify_singular(zeros).empty());

    const CellGrid g = rasterize(half_plane_below(0.55), 10);
    const SingularSet s = classify_singular(g);
    REQUIRE(s.size() == 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(s[static_cast<std::size_t>(i)].i == i);
        CHECK(s[static_cast<std::size_t>(i)].j == 5);
    }
}

TEST_CASE("classify_singular: circle count scales like the perimeter") {
    const double r = 0.3;
    const CellGrid g = rasterize(Shape::circle({0.5, 0.5}, r), 30);
    const SingularSet s = classify_singular(g);
    CHECK(static_cast<double>(s.size()) <= 4.0 * (2.0 * kPi * r) * 30.0);
    CHECK(s.size() >= 30);  // at least ~perimeter/h cells are cut
}

TEST_CASE("classify_singular validates eps") {
    CellGrid g(4, 0.5);
    CHECK_THROWS_AS(classify_singular(g, 0.7), std::invalid_argument);
    CHECK_THROWS_AS(classify_singular(g, 0.0), std::invalid_argument);
}

TEST_CASE("total_mass trivial grids") {
    CHECK(total_mass(CellGrid(5, 1.0)) == Catch::Approx(1.0).margin(1e-15));
    CHECK(total_mass(CellGrid(5, 0.0)) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("periodic indexing wraps both axes") {
    CellGrid g(4);
    g.set(1, 2, 0.75);
    CHECK(g.at(1 + 4, 2) == 0.75);
    CHECK(g.at(1 - 4, 2) == 0.75);
    CHECK(g.at(1, 2 + 8) == 0.75);
    CHECK(g.at(-3, -2) == 0.75);
}

TEST_CASE("refinement keeps total mass within tolerance of the true area") {
    const Shape c = Shape::circle({0.47, 0.53}, 0.31);
    for (int l : {8, 16, 32, 64}) {
        const CellGrid g = rasterize(c, l, 1e-13);
        CHECK(std::abs(total_mass(g) - c.area()) < 1e-11);
    }
}

TEST_CASE("difference shape: Zalesak-style notched circle") {
    const Shape disc = Shape::circle({0.5, 0.5}, 0.25);
    const Shape notch = Shape::polygon({{0.45, 0.2}, {0.55, 0.2}, {0.55, 0.5}, {0.45, 0.5}});
    const Shape zalesak = Shape::difference(disc, notch);
    CHECK(zalesak.contains({0.5, 0.6}));
    CHECK_FALSE(zalesak.contains({0.5, 0.45}));
    // area = disc area - notch-overlap; the notch is fully inside except below the disc
    const double overlap = oracles::box_fraction(
                               [&](double x, double y) {
                                   return disc.contains({x, y}) && notch.contains({x, y});
                               },
                               Box(0.45, 0.2, 0.55, 0.5), 1e-9) *
                           (0.1 * 0.3);
    CHECK(zalesak.area() == Catch::Approx(kPi * 0.0625 - overlap).margin(1e-7));
    const CellGrid g = rasterize(zalesak, 20, 1e-12);
    CHECK(total_mass(g) == Catch::Approx(zalesak.area()).margin(1e-10));
}

TEST_CASE("polar fourier blob: consistent membership and mass") {
    const Shape blob = Shape::polar_fourier({0.5, 0.5}, 0.3, {0.05, -0.02}, {0.03}, 4096);
    CHECK(blob.contains({0.5, 0.5}));
    CHECK_FALSE(blob.contains({0.95, 0.95}));
    const CellGrid g = rasterize(blob, 16);
    CHECK(total_mass(g) == Catch::Approx(blob.area()).margin(1e-10));
}
