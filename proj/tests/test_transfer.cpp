#include <omp.h>

#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "dynlap/transfer.hpp"

using namespace dynlap;
constexpr double pi = std::numbers::pi;

namespace {

double entry(const SparseMatrix& m, std::size_t i, std::size_t j) {
  return m.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

Vector column_sums(const SparseMatrix& m) { return Vector::Ones(m.rows()).transpose() * m; }

}  // namespace

TEST_CASE("identity map gives the identity matrix") {
  for (const Domain& d : {Domain::rectangle(1.5, 1), Domain::cylinder_x(4, 1), Domain::torus(1, 1)}) {
    const Grid g(d, 9, 5);
    CHECK(is_identity(build_ulam(g, g, identity_map(d), 6).P));
  }
}

TEST_CASE("whole-box translation gives a permutation") {
  const Grid g(Domain::torus(2 * pi, 2 * pi), 16, 8);
  const TransitionMatrix tm = build_ulam(g, g, translation_map(g.domain(), g.box_width(), 0.0), 5);
  CHECK(tm.P.nonZeros() == static_cast<Eigen::Index>(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k) {
    const BoxIndex b = g.box(k);
    CHECK(entry(tm.P, k, g.index((b.i + 1) % g.nx(), b.j)) == 1.0);
  }
  // and pushforward permutes the field accordingly
  const ScalarField f = ScalarField::sample(g, [](double x, double y) { return std::sin(x) + 3 * std::cos(y); });
  const ScalarField pf = pushforward(tm, f);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const BoxIndex b = g.box(k);
    CHECK(pf[g.index((b.i + 1) % g.nx(), b.j)] == f[k]);
  }
}

TEST_CASE("brute-force oracle: shear on a 4x2 cylinder grid, q = 8") {
  const Grid g(shear_domain(), 4, 2);
  const std::size_t q = 8;
  // every test point written out by hand from the box geometry
  std::map<std::pair<std::size_t, std::size_t>, int> counts;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t b = 0; b < q; ++b)
        for (std::size_t a = 0; a < q; ++a) {
          const double x = 1.0 * static_cast<double>(i) + (static_cast<double>(a) + 0.5) / q;
          const double y = 0.5 * static_cast<double>(j) + 0.5 * (static_cast<double>(b) + 0.5) / q;
          const double tx = std::fmod(x + y, 4.0);
          const auto ii = static_cast<std::size_t>(std::floor(tx / 1.0));
          const auto jj = static_cast<std::size_t>(std::floor(y / 0.5));
          ++counts[{j * 4 + i, jj * 4 + ii}];
        }
  const TransitionMatrix tm = build_ulam(g, g, builtin_shear(), q);
  CHECK(tm.P.nonZeros() == static_cast<Eigen::Index>(counts.size()));
  for (std::size_t r = 0; r < g.size(); ++r)
    for (std::size_t c = 0; c < g.size(); ++c) {
      const auto it = counts.find({r, c});
      const double expect = it == counts.end() ? 0.0 : it->second / 64.0;
      CHECK(entry(tm.P, r, c) == expect);
    }
}

TEST_CASE("pushforward of constants") {
  // volume-preserving maps give doubly stochastic P, so P̃ fixes constants
  const Grid shear(shear_domain(), 64, 16);
  const TransitionMatrix ts = build_ulam(shear, shear, builtin_shear(), 10);
  for (double v : pushforward(ts, ScalarField(shear, 1.0)).values) CHECK(std::abs(v - 1.0) < 1e-10);

  // ties on the 2π torus: image points exactly on box edges must be attributed consistently
  const Grid torus(standard_map_domain(), 64, 64);
  const TransitionMatrix tt = build_ulam(torus, torus, builtin_torus_shear(), 10);
  CHECK((column_sums(tt.P).array() - 1.0).abs().maxCoeff() < 1e-12);

  // a compressing map is row stochastic but not column stochastic
  const Domain unit = Domain::rectangle(1, 1);
  const Grid g(unit, 8, 8);
  const FlowMap squash("square", unit, unit, [](Point p) { return Point{p.x * p.x, p.y}; });
  const TransitionMatrix tq = build_ulam(g, g, squash, 8);
  CHECK(row_stochastic_defect(tq.P) < 1e-12);
  CHECK((column_sums(tq.P).array() - 1.0).abs().maxCoeff() > 0.1);
}

TEST_CASE("shear pushforward approximates composition with the inverse map") {
  const Grid g(shear_domain(), 256, 64);
  const TransitionMatrix tm = build_ulam(g, g, builtin_shear(), 10);
  const double hp = pi / 2;
  const ScalarField f = ScalarField::sample(g, [&](double x, double y) { return std::sin((x + y / 2) * hp); });
  const ScalarField pf = pushforward(tm, f);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point c = g.center(k);
    err = std::max(err, std::abs(pf[k] - std::sin((c.x - c.y / 2) * hp)));
  }
  CHECK(err < hp * g.box_diagonal());
}

TEST_CASE("property: row stochasticity and entry range") {
  struct Case {
    Grid grid;
    FlowMap map;
  };
  const std::vector<Case> cases{{Grid(shear_domain(), 32, 8), builtin_shear()},
                                {Grid(standard_map_domain(), 24, 24), builtin_standard_map()},
                                {Grid(standard_map_domain(), 20, 20), builtin_torus_shear()},
                                {Grid(transitory_domain(), 12, 12), builtin_transitory_flow(0.05)}};
  for (const Case& c : cases) {
    const TransitionMatrix tm = build_ulam(c.grid, c.grid, c.map, 7);
    CHECK(row_stochastic_defect(tm.P) <= 1e-12);
    for (Eigen::Index r = 0; r < tm.P.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(tm.P, r); it; ++it) {
        CHECK(it.value() > 0.0);
        CHECK(it.value() <= 1.0);
      }
  }
}

TEST_CASE("property: refinement consistency on the shear") {
  const Grid g(shear_domain(), 16, 4);
  const double lip = (1.0 + std::sqrt(5.0)) / 2.0;  // spectral norm of [[1,1],[0,1]]
  for (std::size_t q : {4, 8, 16}) {
    const SparseMatrix a = build_ulam(g, g, builtin_shear(), q).P;
    const SparseMatrix b = build_ulam(g, g, builtin_shear(), 2 * q).P;
    const double change = SparseMatrix(a - b).coeffs().abs().maxCoeff();
    CHECK(change <= 4.0 * g.box_diagonal() * lip / static_cast<double>(q));
  }
}

TEST_CASE("parallel and serial construction agree bit for bit") {
  const Grid g(standard_map_domain(), 32, 32);
  const FlowMap t = builtin_standard_map();
  const SparseMatrix serial = build_ulam_serial(g, g, t, 9).P;
  for (int threads : {1, 3}) {
    omp_set_num_threads(threads);
    const SparseMatrix par = build_ulam(g, g, t, 9).P;
    CHECK(par.nonZeros() == serial.nonZeros());
    CHECK(SparseMatrix(par - serial).coeffs().abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("distinct image domain") {
  const Domain src = Domain::rectangle(1, 1);
  const Domain img = Domain::rectangle(2, 1);
  const FlowMap stretch("stretch", src, img, [](Point p) { return Point{2 * p.x, p.y}; });
  const Grid gs(src, 4, 4), gi(img, 4, 4);
  const TransitionMatrix tm = build_ulam(gs, gi, stretch, 4);
  CHECK(tm.P.rows() == 16);
  CHECK(tm.P.cols() == 16);
  CHECK(row_stochastic_defect(tm.P) < 1e-12);
  // box i of the source covers x in [i/4, (i+1)/4) whose image [i/2, (i+1)/2) is image box i
  for (std::size_t k = 0; k < gs.size(); ++k) CHECK(entry(tm.P, k, k) == 1.0);

  const Grid wrong(Domain::rectangle(3, 1), 4, 4);
  CHECK_THROWS_AS(build_ulam(gs, wrong, stretch, 4), Error);
}

TEST_CASE("pushforward of the identity returns the field") {
  const Grid g(Domain::rectangle(1, 1), 7, 5);
  const ScalarField f = ScalarField::sample(g, [](double x, double y) { return x * x - y; });
  const ScalarField pf = pushforward(build_ulam(g, g, identity_map(g.domain()), 3), f);
  CHECK(pf.values == f.values);
}
