#include <catch2/catch_amalgamated.hpp>

#include "qszego/polynomial.hpp"
#include "qszego/rng.hpp"

using namespace qszego;

TEST_CASE("multi-index degrees") {
  const GroupDim dim(2);
  MultiIndex I(dim.topdim());
  I.a[0] = 2;      // horizontal
  I.a[4] = 1;      // vertical t_1
  CHECK(I.order() == 3);
  CHECK(I.hom_degree(dim) == 4);
  CHECK(I.hom_degree(dim) >= I.order());

  MultiIndex H(dim.topdim());
  H.a[1] = 3;
  CHECK(H.hom_degree(dim) == H.order());
}

TEST_CASE("index enumeration counts") {
  const GroupDim dim(2);
  // d <= 2 over 4 horizontal + 3 vertical slots: 1 + 4 + (10 + 3)
  CHECK(enumerate_indices(dim, 2).size() == 18);
  CHECK(enumerate_indices(dim, 0).size() == 1);
  CHECK(enumerate_indices(dim, 1).size() == 5);

  // independent combinatorial count for d <= 2: C(4,1) choices etc.
  std::size_t expect = 1 /*const*/ + 4 /*linear*/ + (4 * 5 / 2 /*y_i y_j*/ + 3 /*t_a*/);
  CHECK(enumerate_indices(dim, 2).size() == expect);
}

TEST_CASE("monomial homogeneity under dilations") {
  const GroupDim dim(2);
  CounterRng rng(17, "poly.hom");
  const auto idx = enumerate_indices(dim, 3);
  for (std::size_t m = 0; m < idx.size(); ++m) {
    const auto P = QPolynomial::monomial(dim, idx[m], Quaternion::real(1.0));
    GroupPoint g(dim);
    for (int a = 0; a < 3; ++a) g.t[a] = rng.uniform(10 * m + a, -2, 2);
    for (int i = 0; i < dim.horiz(); ++i) g.y[i] = rng.uniform(10 * m + 3 + i, -2, 2);
    const double r = 1.7;
    const Quaternion lhs = P.eval(dilate(r, g));
    const Quaternion rhs = P.eval(g) * std::pow(r, idx[m].hom_degree(dim));
    CHECK(abs(lhs - rhs) <= 1e-12 * (1.0 + abs(rhs)));
  }
}

TEST_CASE("symbolic field application") {
  const GroupDim dim(2);

  SECTION("Y_1 y_1 = 1") {
    const auto P = QPolynomial::coordinate(dim, 0);
    const auto D = P.apply_Y(1);
    CHECK(D.hom_degree() == 0);
    CHECK(abs(D.eval(GroupPoint(dim)) - Quaternion::real(1.0)) == 0.0);
  }
  SECTION("commutator on t_1 reproduces the structure constant") {
    const auto f = QPolynomial::coordinate(dim, dim.horiz() + 0);  // t_1
    const auto c12 = f.apply_Y(2).apply_Y(1) - f.apply_Y(1).apply_Y(2);
    // [Y_1, Y_2] t_1 = 4 b^1_{12} = 4
    GroupPoint g(dim);
    g.y = {0.3, -0.7, 1.1, 0.2};
    CHECK(abs(c12.eval(g) - Quaternion::real(4.0)) < 1e-14);
  }
  SECTION("sub-laplacian of |y|^2 is 2(4n-4), of t_1 is 0") {
    for (int n : {2, 3}) {
      const GroupDim d(n);
      QPolynomial ysq(d);
      for (int i = 0; i < d.horiz(); ++i) {
        MultiIndex I(d.topdim());
        I.a[i] = 2;
        ysq.add(I, Quaternion::real(1.0));
      }
      QPolynomial lap(d);
      for (int j = 1; j <= d.horiz(); ++j) lap = lap + ysq.apply_Y(j).apply_Y(j);
      GroupPoint g(d);
      g.y[0] = 0.4;
      CHECK(abs(lap.eval(g) - Quaternion::real(2.0 * d.horiz())) < 1e-13);

      const auto t1 = QPolynomial::coordinate(d, d.horiz());
      QPolynomial lap_t(d);
      for (int j = 1; j <= d.horiz(); ++j) lap_t = lap_t + t1.apply_Y(j).apply_Y(j);
      CHECK(lap_t.empty());
    }
  }
}

TEST_CASE("left translate expands the composed argument") {
  const GroupDim dim(2);
  CounterRng rng(17, "poly.translate");
  QPolynomial P(dim);
  const auto idx = enumerate_indices(dim, 3);
  for (std::size_t m = 0; m < idx.size(); ++m)
    P.add(idx[m], Quaternion{rng.uniform(4 * m, -1, 1), rng.uniform(4 * m + 1, -1, 1),
                             rng.uniform(4 * m + 2, -1, 1), rng.uniform(4 * m + 3, -1, 1)});
  GroupPoint h(dim), u(dim);
  h.t = {0.2, -0.3, 0.5};
  h.y = {1.0, -0.5, 0.25, 2.0};
  u.t = {-1.0, 0.7, 0.1};
  u.y = {0.3, 0.4, -0.6, 0.9};
  const auto Q = P.left_translate(h);
  CHECK(abs(Q.eval(u) - P.eval(group_mul(h, u))) < 1e-12);
  CHECK(Q.hom_degree() <= P.hom_degree());
}
