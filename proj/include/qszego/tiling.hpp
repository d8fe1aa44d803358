#ifndef QSZEGO_TILING_HPP
#define QSZEGO_TILING_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qszego/group.hpp"
#include "qszego/rng.hpp"

namespace qszego {

/// Address (scale j, lattice point gamma = (b, a)) of the tile
/// T(j, gamma) = delta_{2^j}(tau_gamma(A)), A the basic tile.
struct TileAddress {
  int j = 0;
  std::array<std::int64_t, kMaxHoriz> a{};
  std::array<std::int64_t, 3> b{};
  int horiz = 0;

  TileAddress() = default;
  TileAddress(GroupDim dim, int scale) : j(scale), horiz(dim.horiz()) {}

  bool operator==(const TileAddress& o) const {
    if (j != o.j || horiz != o.horiz || b != o.b) return false;
    for (int i = 0; i < horiz; ++i)
      if (a[i] != o.a[i]) return false;
    return true;
  }
  bool operator<(const TileAddress& o) const {
    if (j != o.j) return j < o.j;
    if (b != o.b) return b < o.b;
    for (int i = 0; i < horiz; ++i)
      if (a[i] != o.a[i]) return a[i] < o.a[i];
    return false;
  }

  GroupPoint lattice_point(GroupDim dim) const {
    GroupPoint g(dim);
    for (int i = 0; i < 3; ++i) g.t[i] = static_cast<double>(b[i]);
    for (int i = 0; i < horiz; ++i) g.y[i] = static_cast<double>(a[i]);
    return g;
  }
};

/// Lattice product gamma * gamma' computed in integers (the vertical form of
/// integer points is even, so this is exact).
inline TileAddress lattice_mul(GroupDim dim, const TileAddress& g,
                               const TileAddress& h) {
  TileAddress r(dim, g.j);
  for (int i = 0; i < dim.horiz(); ++i) r.a[i] = g.a[i] + h.a[i];
  for (int alpha = 1; alpha <= 3; ++alpha) {
    const auto& bm = b_matrix(alpha);
    std::int64_t s = 0;
    for (int l = 0; l < dim.blocks(); ++l)
      for (int k = 0; k < 4; ++k)
        for (int jj = 0; jj < 4; ++jj)
          if (bm[k][jj] != 0) s += bm[k][jj] * g.a[4 * l + k] * h.a[4 * l + jj];
    r.b[alpha - 1] = g.b[alpha - 1] + h.b[alpha - 1] + 2 * s;
  }
  return r;
}

inline TileAddress lattice_inv(GroupDim dim, const TileAddress& g) {
  TileAddress r(dim, g.j);
  for (int i = 0; i < dim.horiz(); ++i) r.a[i] = -g.a[i];
  // (-b - B(a, -a), -a) = (-b, -a) by skew symmetry
  for (int i = 0; i < 3; ++i) r.b[i] = -g.b[i];
  return r;
}

/// Parameters of the basic tile A: series bound, inner-ball exponent,
/// truncation depth and the tile center.
struct BasicTileData {
  GroupDim dim;
  double Mbound;
  int n0;
  int m0;
  GroupPoint g_o;

  explicit BasicTileData(GroupDim d, int depth = 26)
      : dim(d), Mbound(8.0 * (d.n - 1)), m0(depth), g_o(d) {
    n0 = 1;
    while (!(n0 > 2.0 + std::log(Mbound) / std::log(4.0))) ++n0;
    for (int i = 0; i < d.horiz(); ++i) g_o.y[i] = std::ldexp(1.0, -n0 - 1);
    g_o.t = {0.5, 0.5, 0.5};
  }

  double tail_bound(int depth) const {
    return Mbound * std::pow(0.25, depth) / 3.0;
  }
};

struct FEval {
  std::array<double, 3> value{};
  double err_bound = 0.0;
};

/// F_j(y) = sum_{m >= 1} 4^{-m} B_j([2^m y] mod 2, <2^m y>), truncated at
/// depth m0 with the certified tail bound. Once 2^m y is integral all later
/// terms vanish and the bound is exactly zero.
inline FEval f_eval(const BasicTileData& btd, std::span<const double> y,
                    int depth = 0) {
  if (depth <= 0) depth = btd.m0;
  const int nh = static_cast<int>(y.size());
  FEval out;
  std::array<double, kMaxHoriz> parity{}, frac{};
  for (int m = 1; m <= depth; ++m) {
    bool all_integer = true;
    for (int i = 0; i < nh; ++i) {
      const double s = std::ldexp(y[i], m);
      const double fl = std::floor(s);
      frac[i] = s - fl;
      parity[i] = std::fabs(std::fmod(fl, 2.0));  // 0 or 1
      if (frac[i] != 0.0) all_integer = false;
    }
    if (all_integer) return out;  // exact, zero tail
    const auto bj = b_form(std::span<const double>(parity.data(), nh),
                           std::span<const double>(frac.data(), nh));
    const double w = std::pow(0.25, m);
    for (int a = 0; a < 3; ++a) out.value[a] += w * bj[a];
  }
  out.err_bound = btd.tail_bound(depth);
  return out;
}

enum class Containment { No, Yes, BoundaryUnclear };

/// Membership of g in T(j, gamma) through the half-open box conditions
///   y - a in [0,1)^{4n-4},  0 <= t_j - b_j - B_j(a, y-a) - F_j(y-a) < 1,
/// after rescaling by delta_{2^{-j}}. Returns BoundaryUnclear when the F
/// truncation bound straddles a comparison.
inline Containment tile_contains(const BasicTileData& btd, const TileAddress& addr,
                                 const GroupPoint& g, int depth = 0) {
  const GroupDim dim = btd.dim;
  const GroupPoint u = dilate(std::ldexp(1.0, -addr.j), g);
  std::array<double, kMaxHoriz> rel{};
  for (int i = 0; i < dim.horiz(); ++i) {
    rel[i] = u.y[i] - static_cast<double>(addr.a[i]);
    if (!(rel[i] >= 0.0 && rel[i] < 1.0)) return Containment::No;
  }
  const auto relspan = std::span<const double>(rel.data(), dim.horiz());
  const FEval fe = f_eval(btd, relspan, depth);
  std::array<double, kMaxHoriz> acoord{};
  for (int i = 0; i < dim.horiz(); ++i) acoord[i] = static_cast<double>(addr.a[i]);
  const auto ba = b_form(std::span<const double>(acoord.data(), dim.horiz()), relspan);
  bool unclear = false;
  for (int a = 0; a < 3; ++a) {
    const double tau = u.t[a] - static_cast<double>(addr.b[a]) - ba[a] - fe.value[a];
    const double e = fe.err_bound;
    if (tau < -e || tau >= 1.0 + e) return Containment::No;
    if (tau < e || tau >= 1.0 - e) unclear = unclear || e > 0.0;
  }
  return unclear ? Containment::BoundaryUnclear : Containment::Yes;
}

/// The unique scale-j address whose tile contains g. Raises the truncation
/// depth once before giving up on boundary-ambiguous data.
inline TileAddress locate(const BasicTileData& btd, const GroupPoint& g, int j) {
  const GroupDim dim = btd.dim;
  const GroupPoint u = dilate(std::ldexp(1.0, -j), g);
  TileAddress addr(dim, j);
  std::array<double, kMaxHoriz> rel{}, acoord{};
  for (int i = 0; i < dim.horiz(); ++i) {
    const double fl = std::floor(u.y[i]);
    addr.a[i] = static_cast<std::int64_t>(fl);
    acoord[i] = fl;
    rel[i] = u.y[i] - fl;
  }
  const auto relspan = std::span<const double>(rel.data(), dim.horiz());
  const auto ba = b_form(std::span<const double>(acoord.data(), dim.horiz()), relspan);
  for (int depth : {btd.m0, btd.m0 + 8}) {
    const FEval fe = f_eval(btd, relspan, depth);
    bool ok = true;
    for (int a = 0; a < 3; ++a) {
      const double tau = u.t[a] - ba[a] - fe.value[a];
      const double fl = std::floor(tau);
      if (tau - fl < fe.err_bound || tau - fl > 1.0 - fe.err_bound) ok = ok && fe.err_bound == 0.0;
      addr.b[a] = static_cast<std::int64_t>(fl);
    }
    if (ok) return addr;
  }
  throw BoundaryUncertain("locate: point within truncation tolerance of a tile face");
}

/// Children T(j-1, delta_2(gamma) * gamma'), gamma' in Gamma_0 =
/// {a in {0,1}, b in {0,..,3}}; there are 2^{4n+2} of them, enumerated in
/// lexicographic (a, b) order.
inline std::vector<TileAddress> children(GroupDim dim, const TileAddress& addr) {
  TileAddress twice(dim, addr.j - 1);
  for (int i = 0; i < dim.horiz(); ++i) twice.a[i] = 2 * addr.a[i];
  for (int i = 0; i < 3; ++i) twice.b[i] = 4 * addr.b[i];

  std::vector<TileAddress> out;
  out.reserve(std::size_t{1} << (dim.horiz() + 6));
  TileAddress gp(dim, addr.j - 1);
  auto rec_b = [&](auto&& self, int slot) -> void {
    if (slot == 3) {
      out.push_back(lattice_mul(dim, twice, gp));
      out.back().j = addr.j - 1;
      return;
    }
    for (int v = 0; v < 4; ++v) {
      gp.b[slot] = v;
      self(self, slot + 1);
    }
    gp.b[slot] = 0;
  };
  auto rec_a = [&](auto&& self, int slot) -> void {
    if (slot == dim.horiz()) {
      rec_b(rec_b, 0);
      return;
    }
    for (int v = 0; v < 2; ++v) {
      gp.a[slot] = v;
      self(self, slot + 1);
    }
    gp.a[slot] = 0;
  };
  rec_a(rec_a, 0);
  return out;
}

namespace detail {
inline std::int64_t floor_mod(std::int64_t v, std::int64_t m) {
  std::int64_t r = v % m;
  return r < 0 ? r + m : r;
}
}  // namespace detail

/// The unique coarser address with addr among its children.
inline TileAddress parent(GroupDim dim, const TileAddress& addr) {
  TileAddress up(dim, addr.j + 1);
  TileAddress rem(dim, addr.j);  // gamma' in Gamma_0
  for (int i = 0; i < dim.horiz(); ++i) {
    rem.a[i] = detail::floor_mod(addr.a[i], 2);
    up.a[i] = (addr.a[i] - rem.a[i]) / 2;
  }
  // b = 4 b_up + b' + B(2 a_up, a')
  TileAddress twice(dim, 0);
  for (int i = 0; i < dim.horiz(); ++i) twice.a[i] = 2 * up.a[i];
  const TileAddress cross = lattice_mul(dim, twice, rem);  // b-part = B(2a_up, a')
  for (int i = 0; i < 3; ++i) {
    const std::int64_t r = addr.b[i] - cross.b[i];
    const std::int64_t bp = detail::floor_mod(r, 4);
    up.b[i] = (r - bp) / 4;
  }
  return up;
}

inline double tile_width(const TileAddress& addr) { return std::ldexp(1.0, addr.j); }

inline GroupPoint tile_center(const BasicTileData& btd, const TileAddress& addr) {
  const GroupPoint gamma = addr.lattice_point(btd.dim);
  return dilate(tile_width(addr), group_mul(gamma, btd.g_o));
}

/// Uniform sample of T(j, gamma): y uniform over the unit box, t uniform over
/// the fiber above it. Constructed in tile-local coordinates, so samples of
/// dilated/translated tiles are the exact dilates/translates of each other.
inline GroupPoint tile_sample(const BasicTileData& btd, const TileAddress& addr,
                              std::span<const double> unit) {
  const GroupDim dim = btd.dim;
  GroupPoint u(dim);
  std::array<double, kMaxHoriz> rel{}, acoord{};
  for (int i = 0; i < dim.horiz(); ++i) {
    rel[i] = unit[i];
    acoord[i] = static_cast<double>(addr.a[i]);
    u.y[i] = acoord[i] + rel[i];
  }
  const auto relspan = std::span<const double>(rel.data(), dim.horiz());
  const FEval fe = f_eval(btd, relspan);
  const auto ba = b_form(std::span<const double>(acoord.data(), dim.horiz()), relspan);
  for (int a = 0; a < 3; ++a)
    u.t[a] = static_cast<double>(addr.b[a]) + ba[a] + fe.value[a] +
             unit[dim.horiz() + a];
  return dilate(tile_width(addr), u);
}

}  // namespace qszego

#endif
