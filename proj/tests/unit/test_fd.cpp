#include <catch2/catch_amalgamated.hpp>

#include "qszego/fd.hpp"
#include "qszego/rng.hpp"

using namespace qszego;

namespace {
GroupPoint random_point(GroupDim dim, const CounterRng& rng, std::uint64_t k) {
  GroupPoint g(dim);
  std::uint64_t c = k * (dim.topdim() + 1);
  for (int a = 0; a < 3; ++a) g.t[a] = rng.uniform(c++, -1.5, 1.5);
  for (int i = 0; i < dim.horiz(); ++i) g.y[i] = rng.uniform(c++, -1.5, 1.5);
  return g;
}
}  // namespace

TEST_CASE("first derivative of a coordinate") {
  const GroupDim dim(2);
  auto f = [](const GroupPoint& g) { return Quaternion::real(g.y[0]); };
  CounterRng rng(23, "fd.first");
  for (std::uint64_t k = 0; k < 50; ++k) {
    const GroupPoint g = random_point(dim, rng, k);
    CHECK(abs(apply_Y(dim, 1, f, g) - Quaternion::real(1.0)) < 1e-10);
  }
  CHECK_THROWS_AS(apply_Y(dim, 1, f, GroupPoint(dim), FdPolicy{1e-14, 1e-14}),
                  StepTooSmall);
  CHECK_THROWS_AS(apply_Y(dim, 99, f, GroupPoint(dim)), DimMismatch);
}

TEST_CASE("FD commutator table matches the structure constants") {
  // FD estimate of [Y_{4l+k}, Y_{4l'+j}] f versus 4 delta_{ll'} sum_a b^a_{kj} df/dt_a
  // on a quadratic polynomial, every index pair, n in {2,3}.
  for (int n : {2, 3}) {
    const GroupDim dim(n);
    CounterRng rng(23, "fd.commutator");
    QPolynomial f(dim);
    const auto idx = enumerate_indices(dim, 2);
    for (std::size_t m = 0; m < idx.size(); ++m)
      f.add(idx[m], Quaternion::real(rng.uniform(m, -1, 1)));
    auto fe = [&](const GroupPoint& g) { return f.eval(g); };

    const GroupPoint g = random_point(dim, rng, 7777);
    const FdPolicy pol = FdPolicy::homogeneous(1e-2);
    for (int jk = 1; jk <= dim.horiz(); ++jk)
      for (int jj = 1; jj <= dim.horiz(); ++jj) {
        auto yj = [&](const GroupPoint& x) { return apply_Y(dim, jj, fe, x, pol); };
        auto yk = [&](const GroupPoint& x) { return apply_Y(dim, jk, fe, x, pol); };
        const Quaternion comm =
            apply_Y(dim, jk, yj, g, pol) - apply_Y(dim, jj, yk, g, pol);
        Quaternion expect{};
        if ((jk - 1) / 4 == (jj - 1) / 4) {
          for (int alpha = 1; alpha <= 3; ++alpha) {
            const int b = b_matrix(alpha)[(jk - 1) % 4][(jj - 1) % 4];
            if (b != 0)
              expect = expect +
                       4.0 * b * apply_Y(dim, dim.horiz() + alpha, fe, g, pol);
          }
        }
        CHECK(abs(comm - expect) < 1e-7);
      }
  }
}

TEST_CASE("left invariance of the FD fields on polynomials") {
  const GroupDim dim(2);
  CounterRng rng(23, "fd.invariance");
  QPolynomial f(dim);
  const auto idx = enumerate_indices(dim, 3);
  for (std::size_t m = 0; m < idx.size(); ++m)
    f.add(idx[m], Quaternion::real(rng.uniform(m, -1, 1)));
  auto fe = [&](const GroupPoint& g) { return f.eval(g); };

  const FdPolicy pol = FdPolicy::homogeneous(1e-3);
  for (std::uint64_t k = 0; k < 200; ++k) {
    const GroupPoint h = random_point(dim, rng, 2 * k + 1);
    const GroupPoint g = random_point(dim, rng, 2 * k + 2);
    auto fh = [&](const GroupPoint& x) { return fe(group_mul(h, x)); };
    for (int j = 1; j <= dim.topdim(); ++j) {
      const Quaternion lhs = apply_Y(dim, j, fh, g, pol);
      const Quaternion rhs = apply_Y(dim, j, fe, group_mul(h, g), pol);
      CHECK(abs(lhs - rhs) < 1e-8 * (1.0 + abs(rhs)));
    }
  }
}

TEST_CASE("composed derivatives and the horizontal laplacian") {
  const GroupDim dim(2);

  SECTION("zero index returns the value") {
    auto f = [](const GroupPoint& g) { return Quaternion::real(g.t[0] * g.y[1]); };
    GroupPoint g(dim);
    g.t[0] = 2.0;
    g.y[1] = -3.0;
    CHECK(abs(apply_YI(dim, MultiIndex(dim.topdim()), f, g) -
              Quaternion::real(-6.0)) == 0.0);
  }
  SECTION("degree guard") {
    auto f = [](const GroupPoint&) { return Quaternion{}; };
    MultiIndex I(dim.topdim());
    I.a[4] = 3;  // d(I) = 6
    CHECK_THROWS_AS(apply_YI(dim, I, f, GroupPoint(dim)), OrderTooHigh);
  }
  SECTION("laplacian of |y|^2 and of t_1") {
    for (int n : {2, 3}) {
      const GroupDim d(n);
      auto ysq = [&](const GroupPoint& g) { return Quaternion::real(g.y_norm_sq()); };
      auto t1 = [](const GroupPoint& g) { return Quaternion::real(g.t[0]); };
      CounterRng rng(29, "fd.lap");
      const GroupPoint g = random_point(d, rng, 1);
      const FdPolicy pol = FdPolicy::homogeneous(1e-2);
      CHECK(abs(sub_laplacian(d, ysq, g, pol) -
                Quaternion::real(2.0 * d.horiz())) < 1e-8);
      CHECK(abs(sub_laplacian(d, t1, g, pol)) < 1e-8);
    }
  }
}

TEST_CASE("richardson refinement reports a sane estimate") {
  const GroupDim dim(2);
  auto f = [](const GroupPoint& g) {
    return Quaternion::real(std::sin(g.y[0]) * std::cos(g.t[0]));
  };
  GroupPoint g(dim);
  g.y[0] = 0.7;
  g.t[0] = 0.3;
  const auto r = apply_Y_refined(dim, 1, f, g, FdPolicy::isotropic(1e-3));
  const double exact = std::cos(0.7) * std::cos(0.3) +
                       2.0 * g.y[1] * 0.0;  // b^1_{21} y_2 term vanishes at y_2 = 0
  CHECK(std::fabs(r.value.w - exact) < 1e-10);
  CHECK(r.err_est < 1e-7);
}

TEST_CASE("left taylor polynomial") {
  const GroupDim dim(2);

  SECTION("constants and coordinates reproduce themselves") {
    auto c = [](const GroupPoint&) { return Quaternion{2.0, -1.0, 0.5, 0.0}; };
    const auto P0 = taylor_left(dim, c, GroupPoint(dim), 2, FdPolicy::homogeneous(1e-3));
    GroupPoint u(dim);
    u.y[2] = 0.4;
    CHECK(abs(P0.eval(u) - Quaternion{2.0, -1.0, 0.5, 0.0}) < 1e-9);

    auto y1 = [](const GroupPoint& g) { return Quaternion::real(g.y[0]); };
    const auto P1 = taylor_left(dim, y1, GroupPoint(dim), 1, FdPolicy::homogeneous(1e-3));
    GroupPoint v(dim);
    v.y[0] = -1.3;
    CHECK(abs(P1.eval(v) - Quaternion::real(-1.3)) < 1e-9);
  }
  SECTION("remainder decays at order k+1 under norm halving") {
    // f smooth and non-polynomial; remainder |f(g g') - P(g')| should shrink
    // by about 2^{k+1} when ||g'|| halves.
    auto f = [](const GroupPoint& g) {
      return Quaternion::real(std::sin(g.y[0] + 0.5 * g.t[0]) +
                              std::cos(g.y[1] - g.t[2]));
    };
    GroupPoint base(dim);
    base.y = {0.2, -0.1, 0.3, 0.4};
    base.t = {0.1, 0.0, -0.2};
    for (int k : {1, 2}) {
      const auto P = taylor_left(dim, f, base, k, FdPolicy::homogeneous(1e-3));
      GroupPoint dir(dim);
      dir.y = {0.6, 0.3, -0.2, 0.1};
      dir.t = {0.2, -0.3, 0.1};
      double prev = 0.0;
      std::vector<double> remainders;
      for (int lev = 2; lev <= 5; ++lev) {
        const GroupPoint gp = dilate(std::pow(0.5, lev), dir);
        const double rem = abs(f(group_mul(base, gp)) - P.eval(gp));
        remainders.push_back(rem);
        (void)prev;
      }
      // slope fit of log2(remainder) against level
      double num = 0.0, den = 0.0;
      for (std::size_t i = 1; i < remainders.size(); ++i) {
        num += std::log2(remainders[i - 1] / remainders[i]);
        den += 1.0;
      }
      const double order = num / den;
      CHECK(order > k + 1 - 0.35);
      CHECK(order < k + 1 + 0.35);
    }
  }
  SECTION("degree guard") {
    auto f = [](const GroupPoint&) { return Quaternion{}; };
    CHECK_THROWS_AS(taylor_left(dim, f, GroupPoint(dim), 3), OrderTooHigh);
  }
}
