#include <catch2/catch_amalgamated.hpp>

#include "qszego/tiling.hpp"

using namespace qszego;

namespace {
std::vector<double> unit_cube_point(const CounterRng& rng, std::uint64_t k, int d) {
  std::vector<double> u(d);
  for (int i = 0; i < d; ++i) u[i] = rng.uniform(k * d + i);
  return u;
}
GroupPoint random_point(GroupDim dim, const CounterRng& rng, std::uint64_t k,
                        double lo, double hi) {
  GroupPoint g(dim);
  std::uint64_t c = k * (dim.topdim() + 1);
  for (int a = 0; a < 3; ++a) g.t[a] = rng.uniform(c++, lo, hi);
  for (int i = 0; i < dim.horiz(); ++i) g.y[i] = rng.uniform(c++, lo, hi);
  return g;
}
}  // namespace

TEST_CASE("basic tile parameters") {
  const BasicTileData btd(GroupDim(2));
  CHECK(btd.Mbound == 8.0);
  CHECK(btd.n0 == 4);  // smallest integer above 2 + log_4(8) = 3.5
  CHECK(btd.n0 > 2.0 + std::log(btd.Mbound) / std::log(4.0));
  CHECK(btd.g_o.y[0] == std::ldexp(1.0, -5));
  CHECK(btd.g_o.t[0] == 0.5);
  CHECK(btd.tail_bound(26) < 2e-15);
}

TEST_CASE("series evaluation of the tile boundary function") {
  const GroupDim dim(2);
  const BasicTileData btd(dim);

  SECTION("integer input gives exactly zero") {
    const std::array<double, 4> y{3.0, -2.0, 0.0, 7.0};
    const FEval fe = f_eval(btd, std::span<const double>(y.data(), 4));
    CHECK(fe.value == std::array<double, 3>{0.0, 0.0, 0.0});
    CHECK(fe.err_bound == 0.0);
  }
  SECTION("single-term dyadic value") {
    const std::array<double, 4> y{0.5, 0.25, 0.0, 0.0};
    const FEval fe = f_eval(btd, std::span<const double>(y.data(), 4));
    CHECK(fe.value[0] == 0.25);
    CHECK(fe.value[1] == 0.0);
    CHECK(fe.value[2] == 0.0);
    CHECK(fe.err_bound == 0.0);
  }
  SECTION("denominator 2^12 inputs are exact") {
    CounterRng rng(61, "tiling.dyadic");
    for (std::uint64_t k = 0; k < 200; ++k) {
      std::array<double, 4> y{};
      for (int i = 0; i < 4; ++i)
        y[i] = std::floor(rng.uniform(4 * k + i, 0.0, 4096.0)) / 4096.0;
      const FEval fe = f_eval(btd, std::span<const double>(y.data(), 4));
      CHECK(fe.err_bound == 0.0);
    }
  }
  SECTION("small inputs stay below a quarter") {
    CounterRng rng(61, "tiling.small");
    const double cap = std::ldexp(1.0, -btd.n0);
    for (std::uint64_t k = 0; k < 500; ++k) {
      std::array<double, 4> y{};
      for (int i = 0; i < 4; ++i) y[i] = rng.uniform(4 * k + i, 0.0, cap * 0.999);
      const FEval fe = f_eval(btd, std::span<const double>(y.data(), 4));
      for (int a = 0; a < 3; ++a)
        CHECK(std::fabs(fe.value[a]) + fe.err_bound < 0.25);
    }
  }
}

TEST_CASE("membership of distinguished points") {
  const GroupDim dim(2);
  const BasicTileData btd(dim);
  const TileAddress origin_tile(dim, 0);

  CHECK(tile_contains(btd, origin_tile, GroupPoint(dim)) == Containment::Yes);
  CHECK(tile_contains(btd, origin_tile, btd.g_o) == Containment::Yes);

  GroupPoint outside(dim);
  outside.y[0] = -0.25;
  CHECK(tile_contains(btd, origin_tile, outside) == Containment::No);

  // scaling by two maps T(j, gamma) onto T(j+1, gamma)
  CounterRng rng(67, "tiling.equivariance");
  for (std::uint64_t k = 0; k < 300; ++k) {
    const GroupPoint g = random_point(dim, rng, k, -3.0, 3.0);
    TileAddress addr;
    try {
      addr = locate(btd, g, 0);
    } catch (const BoundaryUncertain&) {
      continue;
    }
    TileAddress up = addr;
    up.j = 1;
    CHECK(tile_contains(btd, up, dilate(2.0, g)) == Containment::Yes);
  }
}

TEST_CASE("locate partitions space") {
  const GroupDim dim(2);
  const BasicTileData btd(dim);
  CounterRng rng(71, "tiling.locate");

  SECTION("origin is in the zero tile at every scale") {
    for (int j = -3; j <= 3; ++j) {
      const TileAddress addr = locate(btd, GroupPoint(dim), j);
      for (int i = 0; i < dim.horiz(); ++i) CHECK(addr.a[i] == 0);
      for (int i = 0; i < 3; ++i) CHECK(addr.b[i] == 0);
    }
  }
  SECTION("postcondition and neighbour exclusion across scales") {
    int checked = 0;
    for (std::uint64_t k = 0; k < 2000; ++k) {
      const GroupPoint g = random_point(dim, rng, k, -4.0, 4.0);
      for (int j = -3; j <= 3; ++j) {
        TileAddress addr;
        try {
          addr = locate(btd, g, j);
        } catch (const BoundaryUncertain&) {
          continue;
        }
        CHECK(tile_contains(btd, addr, g) == Containment::Yes);
        ++checked;
        if (k % 50 == 0) {
          // a handful of neighbouring addresses must exclude g
          for (int d = 0; d < 4; ++d) {
            TileAddress n = addr;
            if (d < 2)
              n.a[d] += (d % 2 ? 1 : -1);
            else
              n.b[d - 2] += (d % 2 ? 1 : -1);
            CHECK(tile_contains(btd, n, g) == Containment::No);
          }
        }
      }
    }
    CHECK(checked > 10000);
  }
}

TEST_CASE("children partition their parent") {
  const GroupDim dim(2);
  const BasicTileData btd(dim);

  SECTION("count is 2^{4n+2} and the scale-one cell splits into the unit cells") {
    TileAddress root(dim, 1);
    const auto kids = children(dim, root);
    CHECK(kids.size() == 1024);
    // gamma' = 0 child is the origin tile
    CHECK(kids.front() == TileAddress(dim, 0));
    for (const auto& k : kids) CHECK(parent(dim, k) == root);
  }
  SECTION("parent/child identity on shifted addresses") {
    CounterRng rng(73, "tiling.parent");
    TileAddress addr(dim, 0);
    for (int i = 0; i < dim.horiz(); ++i)
      addr.a[i] = static_cast<std::int64_t>(rng.uniform(i, -6.0, 6.0));
    for (int i = 0; i < 3; ++i)
      addr.b[i] = static_cast<std::int64_t>(rng.uniform(10 + i, -20.0, 20.0));
    const auto kids = children(dim, addr);
    CHECK(kids.size() == 1024);
    for (std::size_t q = 0; q < kids.size(); q += 37)
      CHECK(parent(dim, kids[q]) == addr);
  }
  SECTION("point-level inclusion of children in the parent") {
    CounterRng rng(73, "tiling.inclusion");
    TileAddress root(dim, 2);
    root.a[1] = -1;
    root.b[2] = 3;
    const auto kids = children(dim, root);
    for (std::size_t q = 0; q < kids.size(); q += 101) {
      for (std::uint64_t k = 0; k < 20; ++k) {
        const GroupPoint g =
            tile_sample(btd, kids[q], unit_cube_point(rng, 1000 * q + k, dim.topdim()));
        CHECK(tile_contains(btd, kids[q], g) == Containment::Yes);
        CHECK(tile_contains(btd, root, g) == Containment::Yes);
      }
    }
  }
}

TEST_CASE("self-similarity of the basic tile") {
  // delta_2(A) is the disjoint union of tau_{gamma'}(A) over gamma' with
  // a in {0,1}^{4n-4}, b in {0..3}^3; those are exactly the children of the
  // doubled zero tile read at scale 0.
  const GroupDim dim(2);
  const BasicTileData btd(dim);
  CounterRng rng(79, "tiling.selfsim");
  const TileAddress unit(dim, 0);
  const auto pieces = children(dim, TileAddress(dim, 1));
  REQUIRE(pieces.size() == 1024);

  for (std::uint64_t k = 0; k < 10000; ++k) {
    const GroupPoint gA = tile_sample(btd, unit, unit_cube_point(rng, k, dim.topdim()));
    const GroupPoint doubled = dilate(2.0, gA);
    const TileAddress home = locate(btd, doubled, 0);
    // the containing scale-0 tile is one of the 1024 pieces, and no other
    // piece contains the point
    bool is_piece = false;
    for (const auto& p : pieces) is_piece = is_piece || p == home;
    CHECK(is_piece);
    CHECK(tile_contains(btd, home, doubled) == Containment::Yes);
    if (k % 100 == 0) {
      int containing = 0;
      for (const auto& p : pieces)
        if (tile_contains(btd, p, doubled) == Containment::Yes) ++containing;
      CHECK(containing == 1);
    }
  }

  // conversely, points of the pieces halve into A
  for (std::size_t q = 0; q < pieces.size(); q += 61) {
    for (std::uint64_t k = 0; k < 8; ++k) {
      const GroupPoint u =
          tile_sample(btd, pieces[q], unit_cube_point(rng, 90000 + 100 * q + k, dim.topdim()));
      CHECK(tile_contains(btd, unit, dilate(0.5, u)) == Containment::Yes);
    }
  }
}

TEST_CASE("centers, widths and the ball sandwich") {
  const GroupDim dim(2);
  const BasicTileData btd(dim);
  CounterRng rng(83, "tiling.sandwich");

  CHECK(tile_width(TileAddress(dim, 0)) == 1.0);
  GroupPoint c0 = tile_center(btd, TileAddress(dim, 0));
  CHECK(abs(Quaternion{c0.t[0] - 0.5, c0.t[1] - 0.5, c0.t[2] - 0.5, 0}) == 0.0);
  CHECK(c0.y[0] == btd.g_o.y[0]);

  double inner = std::numeric_limits<double>::infinity();  // over sampled tiles
  double outer = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    TileAddress addr(dim, trial % 5 - 2);
    for (int i = 0; i < dim.horiz(); ++i)
      addr.a[i] = static_cast<std::int64_t>(rng.uniform(100 * trial + i, -4.0, 4.0));
    for (int i = 0; i < 3; ++i)
      addr.b[i] = static_cast<std::int64_t>(rng.uniform(100 * trial + 50 + i, -8.0, 8.0));
    const GroupPoint cent = tile_center(btd, addr);
    CHECK(tile_contains(btd, addr, cent) == Containment::Yes);
    const double w = tile_width(addr);

    double max_d = 0.0;
    for (std::uint64_t k = 0; k < 400; ++k) {
      const GroupPoint g =
          tile_sample(btd, addr, unit_cube_point(rng, 100000 + 1000 * trial + k, dim.topdim()));
      max_d = std::max(max_d, dist(g, cent));
    }
    outer = std::max(outer, max_d / w);

    // largest ball around the center that stays inside, by bisection on
    // fixed probe directions
    const QmcSequence seq(dim.topdim());
    double lo = 0.0, hi_r = 2.0 * w;
    for (int it = 0; it < 24; ++it) {
      const double mid = 0.5 * (lo + hi_r);
      bool all_in = true;
      for (int dprobe = 0; dprobe < 40 && all_in; ++dprobe) {
        GroupPoint u(dim);
        for (int a = 0; a < 3; ++a) u.t[a] = 2.0 * seq.coord(dprobe, a) - 1.0;
        for (int i = 0; i < dim.horiz(); ++i)
          u.y[i] = 2.0 * seq.coord(dprobe, 3 + i) - 1.0;
        const double nrm = hom_norm(u);
        if (nrm == 0.0) continue;
        const GroupPoint probe = group_mul(cent, dilate(mid / nrm, u));
        all_in = tile_contains(btd, addr, probe) != Containment::No;
      }
      (all_in ? lo : hi_r) = mid;
    }
    inner = std::min(inner, lo / w);
  }
  INFO("ball sandwich constants C1 = " << inner << " C2 = " << outer);
  CHECK(inner > 0.0);
  CHECK(outer < 4.0);
  CHECK(inner <= outer);
}

TEST_CASE("tile samples dilate and translate exactly") {
  const GroupDim dim(2);
  const BasicTileData btd(dim);
  CounterRng rng(89, "tiling.samples");
  TileAddress addr(dim, 0);
  addr.a[2] = 3;
  addr.b[1] = -2;
  TileAddress up = addr;
  up.j = 1;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto u = unit_cube_point(rng, k, dim.topdim());
    const GroupPoint g = tile_sample(btd, addr, u);
    const GroupPoint gu = tile_sample(btd, up, u);
    const GroupPoint gd = dilate(2.0, g);
    for (int a = 0; a < 3; ++a) CHECK(gu.t[a] == Catch::Approx(gd.t[a]).margin(1e-14));
    for (int i = 0; i < dim.horiz(); ++i) CHECK(gu.y[i] == gd.y[i]);
  }
}

TEST_CASE("lattice translations permute same-scale tiles") {
  const GroupDim dim(2);
  const BasicTileData btd(dim);
  CounterRng rng(101, "tiling.lattice");
  for (int j : {-1, 0, 2}) {
    TileAddress gamma(dim, j), h(dim, j);
    for (int i = 0; i < dim.horiz(); ++i) {
      gamma.a[i] = static_cast<std::int64_t>(rng.uniform(20 * j + i, -5.0, 5.0));
      h.a[i] = static_cast<std::int64_t>(rng.uniform(200 + 20 * j + i, -5.0, 5.0));
    }
    for (int i = 0; i < 3; ++i) {
      gamma.b[i] = static_cast<std::int64_t>(rng.uniform(400 + 20 * j + i, -9.0, 9.0));
      h.b[i] = static_cast<std::int64_t>(rng.uniform(600 + 20 * j + i, -9.0, 9.0));
    }
    const TileAddress moved = lattice_mul(dim, h, gamma);
    const GroupPoint shift = dilate(tile_width(gamma), h.lattice_point(dim));
    std::vector<double> u(dim.topdim());
    for (int k = 0; k < 50; ++k) {
      for (int d = 0; d < dim.topdim(); ++d)
        u[d] = rng.uniform(1000 + static_cast<std::uint64_t>(k) * 16 + d);
      const GroupPoint g = tile_sample(btd, gamma, u);
      CHECK(tile_contains(btd, moved, group_mul(shift, g)) == Containment::Yes);
    }
  }
}
