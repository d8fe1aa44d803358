#ifndef QSZEGO_SIGN_SEARCH_HPP
#define QSZEGO_SIGN_SEARCH_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "qszego/kernel.hpp"
#include "qszego/parallel.hpp"
#include "qszego/tiling.hpp"

namespace qszego {

struct SignSearchConfig {
  int annulus_lo = 3;        // widths, >= 3
  int annulus_hi = 64;       // widths
  int candidate_points = 512;
  int base_samples = 625;    // points per base tile
  int hat_samples = 125;     // points per candidate tile (pairs = 5^7)
  int prefilter_pairs = 256;
  double threshold = 0.0;    // magnitude floor per 2^{-Q j}; 0 = scale-aware
  int widen_retries = 2;     // multiplies annulus_hi by 2 per retry
  int threads = 0;

  /// Kernel size at the outer annulus radius, three digits of headroom:
  /// the slice value at 1 is (2n-2)! n (2n-1) and |K| ~ that * d^{-Q}.
  double effective_threshold(GroupDim dim) const {
    if (threshold > 0.0) return threshold;
    double slice1 = static_cast<double>(dim.n * (2 * dim.n - 1));
    for (int k = 2; k <= 2 * dim.n - 2; ++k) slice1 *= k;
    return 1e-3 * slice1 * std::pow(static_cast<double>(annulus_hi),
                                    -static_cast<double>(dim.hom_dim()));
  }
};

struct SignTile {
  TileAddress hat;
  int component = 0;   // 1..4
  double magnitude = 0.0;
  double floor_used = 0.0;   // accepted bound, threshold * 2^{-Q j}
  double center_distance_widths = 0.0;
  int candidates_tested = 0;
};

namespace detail {
struct PairScan {
  bool constant_sign[4] = {true, true, true, true};
  double min_abs[4] = {1e300, 1e300, 1e300, 1e300};
  int sign[4] = {0, 0, 0, 0};

  void absorb(Quaternion k) {
    const double comp[4] = {k.w, k.x, k.y, k.z};
    for (int c = 0; c < 4; ++c) {
      const int s = comp[c] > 0.0 ? 1 : comp[c] < 0.0 ? -1 : 0;
      if (sign[c] == 0)
        sign[c] = s;
      else if (s != 0 && s != sign[c])
        constant_sign[c] = false;
      if (s == 0) constant_sign[c] = false;
      min_abs[c] = std::min(min_abs[c], std::fabs(comp[c]));
    }
  }
  /// Best component with constant sign; -1 if none.
  int best(double floor_bound) const {
    int bc = -1;
    for (int c = 0; c < 4; ++c)
      if (constant_sign[c] && min_abs[c] >= floor_bound)
        if (bc < 0 || min_abs[c] > min_abs[bc]) bc = c;
    return bc;
  }
};
}  // namespace detail

/// Candidate same-scale addresses with center distance within the annulus,
/// generated by locating a deterministic low-discrepancy point cloud in
/// offset coordinates (exactly translation- and dilation-equivariant),
/// ordered by center distance then address.
inline std::vector<TileAddress> sign_candidates(const BasicTileData& btd,
                                                const TileAddress& base,
                                                double lo_w, double hi_w,
                                                int points) {
  const GroupDim dim = btd.dim;
  const QmcSequence seq(dim.topdim() + 1);
  std::set<TileAddress> seen;
  std::vector<std::pair<double, TileAddress>> ranked;
  const GroupPoint center0 = group_mul(base.lattice_point(dim), btd.g_o);
  for (int k = 0; k < points; ++k) {
    // log-uniform radius times a sphere direction; plain box sampling would
    // pile every draw onto the outer shell of the annulus
    GroupPoint off(dim);
    for (int a = 0; a < 3; ++a) off.t[a] = 2.0 * seq.coord(k, a) - 1.0;
    for (int i = 0; i < dim.horiz(); ++i)
      off.y[i] = 2.0 * seq.coord(k, 3 + i) - 1.0;
    const double nrm = hom_norm(off);
    if (nrm < 1e-9) continue;
    const double rho =
        lo_w * std::pow(hi_w / lo_w, seq.coord(k, dim.topdim()));
    off = dilate(rho / nrm, off);
    TileAddress cand;
    try {
      cand = locate(btd, group_mul(center0, off), 0);
    } catch (const BoundaryUncertain&) {
      continue;
    }
    cand.j = base.j;
    if (!seen.insert(cand).second) continue;
    const GroupPoint cc = group_mul(cand.lattice_point(dim), btd.g_o);
    const double d = dist(cc, center0);
    if (d < lo_w || d > hi_w) continue;
    ranked.emplace_back(d, cand);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& p, const auto& q) {
              if (p.first != q.first) return p.first < q.first;
              return p.second < q.second;
            });
  std::vector<TileAddress> out;
  out.reserve(ranked.size());
  for (auto& [d, c] : ranked) out.push_back(c);
  return out;
}

/// Searches same-scale tiles in the annulus for one whose pair kernel
/// K(g, ghat) = K(ghat^{-1} g) has a quaternion component of constant sign
/// over the sampled product T x That, with magnitude floor at least
/// threshold * 2^{-Q j}. Returns the first candidate in enumeration order.
inline SignTile sign_tile_search(const KernelContext& ctx, const BasicTileData& btd,
                                 const TileAddress& base,
                                 SignSearchConfig cfg = {}) {
  const GroupDim dim = ctx.dim();
  if (cfg.annulus_lo < 3) throw NotInDomain("sign_tile_search: annulus must start at 3 widths");
  const double Q = dim.hom_dim();
  const double floor_bound =
      cfg.effective_threshold(dim) * std::pow(2.0, -Q * base.j);
  const int threads = cfg.threads > 0 ? cfg.threads : default_threads();

  const QmcSequence seq(dim.topdim());
  auto unit_point = [&](std::uint64_t k, std::uint64_t salt) {
    std::vector<double> u(dim.topdim());
    for (int d = 0; d < dim.topdim(); ++d) u[d] = seq.coord(salt + k, d);
    return u;
  };

  std::vector<GroupPoint> base_pts(cfg.base_samples);
  for (int k = 0; k < cfg.base_samples; ++k)
    base_pts[k] = tile_sample(btd, base, unit_point(k, 101));

  double best_miss = 0.0;
  int tested = 0;
  double hi = cfg.annulus_hi;
  for (int attempt = 0; attempt <= cfg.widen_retries; ++attempt, hi *= 2.0) {
    const auto cands =
        sign_candidates(btd, base, cfg.annulus_lo, hi, cfg.candidate_points << attempt);
    for (const TileAddress& cand : cands) {
      ++tested;
      std::vector<GroupPoint> hat_pts(cfg.hat_samples);
      for (int k = 0; k < cfg.hat_samples; ++k)
        hat_pts[k] = tile_sample(btd, cand, unit_point(k, 9091));

      // cheap prefilter on a pair subsample
      detail::PairScan pre;
      const int pn = std::min<int>(cfg.prefilter_pairs,
                                   cfg.base_samples * cfg.hat_samples);
      for (int k = 0; k < pn; ++k)
        pre.absorb(kernel_pair(ctx, base_pts[k % cfg.base_samples],
                               hat_pts[(k * 31) % cfg.hat_samples]));
      if (pre.best(floor_bound) < 0) {
        for (int c = 0; c < 4; ++c)
          if (pre.constant_sign[c]) best_miss = std::max(best_miss, pre.min_abs[c]);
        continue;
      }

      const std::size_t total =
          static_cast<std::size_t>(cfg.base_samples) * cfg.hat_samples;
      const detail::PairScan scan = parallel_block_reduce<detail::PairScan>(
          total, 8192, threads, detail::PairScan{},
          [&](std::size_t lo, std::size_t hiidx) {
            detail::PairScan s;
            for (std::size_t p = lo; p < hiidx; ++p)
              s.absorb(kernel_pair(ctx, base_pts[p / cfg.hat_samples],
                                   hat_pts[p % cfg.hat_samples]));
            return s;
          },
          [](detail::PairScan a, const detail::PairScan& b) {
            for (int c = 0; c < 4; ++c) {
              if (!b.constant_sign[c] ||
                  (a.sign[c] != 0 && b.sign[c] != 0 && a.sign[c] != b.sign[c]))
                a.constant_sign[c] = false;
              if (a.sign[c] == 0) a.sign[c] = b.sign[c];
              a.min_abs[c] = std::min(a.min_abs[c], b.min_abs[c]);
            }
            return a;
          });
      const int bc = scan.best(floor_bound);
      if (bc >= 0) {
        const GroupPoint c0 = tile_center(btd, base);
        const GroupPoint c1 = tile_center(btd, cand);
        return {cand, bc + 1, scan.min_abs[bc], floor_bound,
                dist(c1, c0) / tile_width(base), tested};
      }
      for (int c = 0; c < 4; ++c)
        if (scan.constant_sign[c]) best_miss = std::max(best_miss, scan.min_abs[c]);
    }
  }
  throw NoCandidateFound("sign_tile_search: best constant-sign floor " +
                         std::to_string(best_miss) + " below bound " +
                         std::to_string(floor_bound));
}

struct SignProbe {
  TileAddress t_minus;  // points h
  TileAddress t_plus;   // points g, signs_m (g_m - h_m) >= kappa width
  double kappa = 0.0;
};

/// Two depth-b descendants of `base` whose horizontal boxes realize the
/// requested sign pattern: picking extreme child columns per coordinate gives
/// the exact separation (2^b - 2) 2^{-b} width(T).
inline SignProbe sign_separation_probe(const BasicTileData& btd, const TileAddress& base,
                                  std::span<const int> signs, int depth = 2) {
  const GroupDim dim = btd.dim;
  if (static_cast<int>(signs.size()) != dim.horiz())
    throw DimMismatch("sign_separation_probe: need one sign per horizontal slot");
  if (depth < 2)
    throw DepthTooShallow("sign_separation_probe: depth 1 boxes cannot separate");

  const std::int64_t span = std::int64_t{1} << depth;
  auto build = [&](bool plus) {
    // y-column at the requested extreme; any t-fiber works, take the one
    // under the base tile's own t-offset 1/2.
    std::array<double, kMaxHoriz + 3> unit{};
    for (int i = 0; i < dim.horiz(); ++i) {
      const bool high = (signs[i] > 0) == plus;
      unit[i] = high ? 1.0 - 0.5 / static_cast<double>(span)
                     : 0.5 / static_cast<double>(span);
    }
    for (int a = 0; a < 3; ++a) unit[dim.horiz() + a] = 0.5;
    const GroupPoint pt =
        tile_sample(btd, base, std::span<const double>(unit.data(), dim.topdim()));
    return locate(btd, pt, base.j - depth);
  };
  SignProbe probe;
  probe.t_plus = build(true);
  probe.t_minus = build(false);
  probe.kappa = static_cast<double>(span - 2) / static_cast<double>(span);
  return probe;
}

}  // namespace qszego

#endif
