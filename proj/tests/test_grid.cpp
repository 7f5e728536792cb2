#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "dynlap/grid.hpp"

using namespace dynlap;
constexpr double pi = std::numbers::pi;

TEST_CASE("domain kinds follow the periodic flags") {
  CHECK(Domain::rectangle(1, 1).is_rectangle());
  CHECK(Domain::cylinder_x(4, 1).is_cylinder());
  CHECK(Domain::torus(1, 1).is_torus());
  Domain bad = Domain::rectangle(1, 1);
  bad.x_max = bad.x_min;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(Grid(Domain::rectangle(1, 1), 0, 3), Error);
}

TEST_CASE("box_of") {
  const Grid unit(Domain::rectangle(1, 1), 2, 2);
  CHECK(unit.box_of({0.25, 0.75}) == BoxIndex{0, 1});
  // closed upper edge of a non-periodic axis belongs to the last box
  CHECK(unit.box_of({1.0, 1.0}) == BoxIndex{1, 1});

  const Grid torus(Domain::torus(2 * pi, 2 * pi), 4, 4);
  CHECK(torus.box_of({2 * pi + 0.1, 0.1}) == torus.box_of({0.1, 0.1}));
  CHECK(torus.box_of({-0.1, 0.1}) == BoxIndex{3, 0});

  try {
    unit.box_of({1.5, 0.5});
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfDomain);
  }
}

TEST_CASE("intra_box_points") {
  const Grid one(Domain::rectangle(1, 1), 1, 1);
  const auto c = one.intra_box_points(0, 1);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == Point{0.5, 0.5});

  const auto four = one.intra_box_points(0, 2);
  REQUIRE(four.size() == 4);
  CHECK(four[0] == Point{0.25, 0.25});
  CHECK(four[1] == Point{0.75, 0.25});
  CHECK(four[2] == Point{0.25, 0.75});
  CHECK(four[3] == Point{0.75, 0.75});

  const Grid g(Domain::cylinder_x(4, 1), 256, 64);
  for (std::size_t k : {std::size_t{0}, std::size_t{777}, g.size() - 1}) {
    const auto pts = g.intra_box_points(k, 40);
    CHECK(pts.size() == 1600);
    std::set<std::pair<double, double>> distinct;
    for (const Point& p : pts) {
      distinct.insert({p.x, p.y});
      CHECK(g.box_index_of(p) == k);
    }
    CHECK(distinct.size() == 1600);
  }
}

TEST_CASE("index bijection and area partition") {
  for (const Domain& d : {Domain::rectangle(1.5, 1), Domain::cylinder_x(4, 1), Domain::torus(2 * pi, 2 * pi)}) {
    const Grid g(d, 12, 7);
    CHECK(g.size() == 84);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(g.index(g.box(k)) == k);
    const double total = g.box_area() * static_cast<double>(g.size());
    CHECK(std::abs(total - d.area()) <= 1e-12 * d.area());
  }
}

TEST_CASE("property: every domain point lies in its box") {
  std::mt19937_64 rng(7);
  for (const Domain& d : {Domain::rectangle(1.5, 1), Domain::cylinder_x(4, 1), Domain::torus(2 * pi, 2 * pi)}) {
    const Grid g(d, 33, 17);
    std::uniform_real_distribution<double> ux(d.x_min - (d.periodic_x ? 3 * d.width() : 0.0),
                                              d.x_max + (d.periodic_x ? 3 * d.width() : 0.0));
    std::uniform_real_distribution<double> uy(d.y_min, d.y_max);
    for (int s = 0; s < 5000; ++s) {
      const Point p{ux(rng), uy(rng)};
      const Point w = d.wrap(p);
      const BoxIndex b = g.box_of(p);
      const double x0 = d.x_min + static_cast<double>(b.i) * g.box_width();
      const double y0 = d.y_min + static_cast<double>(b.j) * g.box_height();
      CHECK(w.x >= x0 - 1e-12);
      CHECK(w.x <= x0 + g.box_width() + 1e-12);
      CHECK(w.y >= y0 - 1e-12);
      CHECK(w.y <= y0 + g.box_height() + 1e-12);
    }
  }
}

TEST_CASE("minimal-image displacement") {
  const Domain d = Domain::cylinder_x(4, 1);
  const Point v = d.displacement({3.9, 0.5}, {0.1, 0.5});
  CHECK(v.x == doctest::Approx(0.2));
  CHECK(v.y == doctest::Approx(0.0));
}

TEST_CASE("scalar field size must match the grid") {
  const Grid g(Domain::rectangle(1, 1), 3, 3);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(8)), Error);
  CHECK(ScalarField(g, 2.0).size() == 9);
}
