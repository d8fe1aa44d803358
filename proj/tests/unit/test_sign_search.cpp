#include <catch2/catch_amalgamated.hpp>

#include "qszego/sign_search.hpp"

using namespace qszego;

TEST_CASE("sign tile exists for the unit tile, n=2") {
  const GroupDim dim(2);
  const KernelContext ctx(dim);
  const BasicTileData btd(dim);

  SignSearchConfig cfg;
  cfg.annulus_lo = 3;
  cfg.annulus_hi = 64;
  const SignTile st = sign_tile_search(ctx, btd, TileAddress(dim, 0), cfg);

  CHECK(st.component >= 1);
  CHECK(st.component <= 4);
  CHECK(st.magnitude > 0.0);
  CHECK(st.center_distance_widths >= 3.0);
  CHECK(st.center_distance_widths <= 64.0);
  INFO("found component " << st.component << " floor " << st.magnitude
                          << " at distance " << st.center_distance_widths);
  CHECK(st.magnitude >= st.floor_used);
  CHECK(st.floor_used > 0.0);
  // explicit thresholds are honored verbatim
  SignSearchConfig strict = cfg;
  strict.threshold = 1e-8;
  const SignTile st2 = sign_tile_search(ctx, btd, TileAddress(dim, 0), strict);
  CHECK(st2.magnitude >= 1e-8);
}

TEST_CASE("sign search is dilation and translation equivariant") {
  const GroupDim dim(2);
  const KernelContext ctx(dim);
  const BasicTileData btd(dim);
  const double Q = dim.hom_dim();

  SignSearchConfig cfg;
  cfg.candidate_points = 256;

  const SignTile base = sign_tile_search(ctx, btd, TileAddress(dim, 0), cfg);

  SECTION("scale shift rescales the floor by 2^{-Q}") {
    const SignTile up = sign_tile_search(ctx, btd, TileAddress(dim, 1), cfg);
    CHECK(up.component == base.component);
    const double ratio = up.magnitude / base.magnitude;
    CHECK(ratio > 0.95 * std::pow(2.0, -Q));
    CHECK(ratio < 1.05 * std::pow(2.0, -Q));
    CHECK(up.center_distance_widths ==
          Catch::Approx(base.center_distance_widths).epsilon(1e-9));

    const SignTile down = sign_tile_search(ctx, btd, TileAddress(dim, -1), cfg);
    const double ratio2 = down.magnitude / base.magnitude;
    CHECK(ratio2 > 0.95 * std::pow(2.0, Q));
    CHECK(ratio2 < 1.05 * std::pow(2.0, Q));
  }
  SECTION("lattice translation produces the translated tile and the same floor") {
    TileAddress shifted(dim, 0);
    shifted.a[0] = 5;
    shifted.a[3] = -2;
    shifted.b[1] = 7;
    const SignTile moved = sign_tile_search(ctx, btd, shifted, cfg);
    CHECK(moved.component == base.component);
    CHECK(std::fabs(moved.magnitude - base.magnitude) <=
          1e-10 * (1.0 + base.magnitude));
    // the found address is the lattice translate of the base one
    const TileAddress expect = lattice_mul(dim, shifted, base.hat);
    CHECK(moved.hat == expect);
  }
}

TEST_CASE("annulus precondition and failure reporting") {
  const GroupDim dim(2);
  const KernelContext ctx(dim);
  const BasicTileData btd(dim);

  SignSearchConfig bad;
  bad.annulus_lo = 1;
  CHECK_THROWS_AS(sign_tile_search(ctx, btd, TileAddress(dim, 0), bad), NotInDomain);

  SignSearchConfig hopeless;
  hopeless.threshold = 1e6;  // unattainable floor
  hopeless.widen_retries = 0;
  hopeless.candidate_points = 64;
  CHECK_THROWS_AS(sign_tile_search(ctx, btd, TileAddress(dim, 0), hopeless),
                  NoCandidateFound);
}

TEST_CASE("sign separation probe realizes requested patterns") {
  const GroupDim dim(2);
  const KernelContext ctx(dim);
  const BasicTileData btd(dim);
  CounterRng rng(97, "signprobe");

  auto sample_unit = [&](std::uint64_t k) {
    std::vector<double> u(dim.topdim());
    for (int i = 0; i < dim.topdim(); ++i) u[i] = rng.uniform(k * 16 + i);
    return u;
  };

  SECTION("all-positive pattern") {
    const std::vector<int> signs(dim.horiz(), 1);
    const TileAddress base(dim, 0);
    const SignProbe pr = sign_separation_probe(btd, base, signs, 2);
    CHECK(pr.kappa == 0.5);
    CHECK(parent(dim, parent(dim, pr.t_plus)) == base);
    CHECK(parent(dim, parent(dim, pr.t_minus)) == base);
    for (std::uint64_t k = 0; k < 200; ++k) {
      const GroupPoint g = tile_sample(btd, pr.t_plus, sample_unit(2 * k));
      const GroupPoint h = tile_sample(btd, pr.t_minus, sample_unit(2 * k + 1));
      for (int i = 0; i < dim.horiz(); ++i)
        CHECK(g.y[i] - h.y[i] >= pr.kappa * tile_width(base) - 1e-12);
    }
  }
  SECTION("mixed pattern and symmetry under flips") {
    const std::vector<int> signs{1, -1, 1, -1};
    const TileAddress base(dim, 1);
    const SignProbe pr = sign_separation_probe(btd, base, signs, 2);
    for (std::uint64_t k = 0; k < 100; ++k) {
      const GroupPoint g = tile_sample(btd, pr.t_plus, sample_unit(5000 + 2 * k));
      const GroupPoint h = tile_sample(btd, pr.t_minus, sample_unit(5000 + 2 * k + 1));
      for (int i = 0; i < dim.horiz(); ++i)
        CHECK(signs[i] * (g.y[i] - h.y[i]) >= pr.kappa * tile_width(base) - 1e-12);
    }
    const std::vector<int> flipped{-1, 1, -1, 1};
    const SignProbe pf = sign_separation_probe(btd, base, flipped, 2);
    CHECK(pf.t_plus == pr.t_minus);
    CHECK(pf.t_minus == pr.t_plus);
  }
  SECTION("kappa is scale independent and depth guarded") {
    const std::vector<int> signs(dim.horiz(), 1);
    double kappa0 = 0.0;
    for (int j = -2; j <= 2; ++j) {
      const SignProbe pr = sign_separation_probe(btd, TileAddress(dim, j), signs, 3);
      if (j == -2) kappa0 = pr.kappa;
      CHECK(pr.kappa == Catch::Approx(kappa0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(sign_separation_probe(btd, TileAddress(dim, 0), signs, 1),
                    DepthTooShallow);
  }
  (void)ctx;
}
