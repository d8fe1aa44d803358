#ifndef QSZEGO_PROJECTION_HPP
#define QSZEGO_PROJECTION_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <functional>

#include "qszego/atoms.hpp"
#include "qszego/kernel.hpp"
#include "qszego/kernel_checks.hpp"
#include "qszego/parallel.hpp"
#include "qszego/tiling.hpp"

namespace qszego {

struct Projection {
  Quaternion value;
  double err_estimate = 0.0;
};

/// (P a)(t, g) = int K((t,g), g') a(g') dg' by the atom's node quadrature.
/// The error estimate compares against the leading half of the node stream.
inline Projection project_atom_nodes(const KernelContext& ctx,
                                     const Atom::Nodes& nodes, double t,
                                     const GroupPoint& g, int threads = 0) {
  if (threads <= 0) threads = default_threads();
  const std::size_t n = nodes.points.size();
  struct Acc {
    Quaternion full{}, half{};
  };
  const Acc acc = parallel_block_reduce<Acc>(
      n, 4096, threads, Acc{},
      [&](std::size_t lo, std::size_t hi) {
        Acc a;
        for (std::size_t k = lo; k < hi; ++k) {
          const Quaternion term =
              kernel_upper(ctx, t, g, nodes.points[k]) * nodes.values[k];
          a.full = a.full + term;
          if (k < n / 2) a.half = a.half + term;
        }
        return a;
      },
      [](Acc a, const Acc& b) {
        a.full = a.full + b.full;
        a.half = a.half + b.half;
        return a;
      });
  const Quaternion full = acc.full * nodes.weight;
  const Quaternion half = acc.half * (nodes.weight * 2.0);
  return {full, abs(full - half)};
}

inline Projection project_atom(const KernelContext& ctx, const Atom& a, double t,
                               const GroupPoint& g, int node_count = 0,
                               int threads = 0) {
  const Atom::Nodes nodes = a.sample_nodes(node_count);
  return project_atom_nodes(ctx, nodes, t, g, threads);
}

struct HpScanPoint {
  double eps = 0.0;
  double value = 0.0;       // int |P a(eps, .)|^p dh including the tail bound
  double tail_bound = 0.0;
  double tail_share = 0.0;
  bool tail_dominates = false;
};

struct HpScanConfig {
  double lambda_mult = 8.0;     // inner region radius, lambda * r
  double outer_mult = 64.0;     // truncation radius, outer_mult * lambda * r
  int inner_nodes = 2048;       // projection quadrature per outer point
  int region_points = 1024;     // accepted outer samples per region
  int threads = 0;
};

/// The h-integral of |P a(eps, h)|^p split as ball + dyadic shells + an
/// analytic tail whose constant is fitted on the outermost shell. All outer
/// samples are constructed in atom-relative coordinates, so the exact
/// dilation reduction between (a, eps) and (a dilated, 1) holds at the
/// quadrature level.
inline HpScanPoint hp_scan_point(const KernelContext& ctx, const Atom& atom,
                                 double eps, const HpScanConfig& cfg = {}) {
  const GroupDim dim = ctx.dim();
  const double Q = dim.hom_dim();
  const double lr = cfg.lambda_mult * atom.radius;
  const int threads = cfg.threads > 0 ? cfg.threads : default_threads();
  const Atom::Nodes nodes = atom.sample_nodes(cfg.inner_nodes);
  const double ball1 = unit_ball_volume(dim).value;

  auto integrand = [&](const GroupPoint& h) {
    return std::pow(abs(project_atom_nodes(ctx, nodes, eps, h, 1).value), atom.p);
  };

  const QmcSequence seq(dim.topdim());
  auto unit_offset = [&](std::uint64_t k) {
    GroupPoint u(dim);
    for (int a = 0; a < 3; ++a) u.t[a] = 2.0 * seq.coord(k, a) - 1.0;
    for (int i = 0; i < dim.horiz(); ++i)
      u.y[i] = 2.0 * seq.coord(k, 3 + i) - 1.0;
    return u;
  };

  // region integral over { lo <= ||offset|| < hi } around the atom center by
  // rejection from the unit shell, exactly dilation covariant
  struct RegionStat {
    double sum = 0.0;
    double fit = 0.0;  // max |P a| * d^{fit_exponent} over the region samples
  };
  auto region = [&](double lo_frac, double radius, double fit_exponent) {
    std::vector<GroupPoint> accepted;
    std::vector<double> dists;
    std::uint64_t k = 0;
    while (static_cast<int>(accepted.size()) < cfg.region_points && k < 4000000) {
      const GroupPoint u = unit_offset(k++);
      const double nrm = hom_norm(u);
      if (nrm >= lo_frac && nrm < 1.0) {
        accepted.push_back(group_mul(atom.center, dilate(radius, u)));
        dists.push_back(nrm * radius);
      }
    }
    const double region_vol =
        ball1 * std::pow(radius, Q) * (1.0 - std::pow(lo_frac, Q));
    RegionStat stat = parallel_block_reduce<RegionStat>(
        accepted.size(), 64, threads, RegionStat{},
        [&](std::size_t lo, std::size_t hi) {
          RegionStat s;
          for (std::size_t q = lo; q < hi; ++q) {
            const double v = integrand(accepted[q]);
            s.sum += v;
            s.fit = std::max(s.fit, std::pow(v, 1.0 / atom.p) *
                                        std::pow(dists[q], fit_exponent));
          }
          return s;
        },
        [](RegionStat a, const RegionStat& b) {
          a.sum += b.sum;
          a.fit = std::max(a.fit, b.fit);
          return a;
        });
    stat.sum = region_vol * stat.sum / static_cast<double>(accepted.size());
    return stat;
  };

  HpScanPoint out;
  out.eps = eps;
  const double decay_exp = Q + atom.alpha + 1.0;
  double total = region(0.0, lr, decay_exp).sum;  // inner ball
  double last_shell = 0.0;
  double radius = lr;
  while (radius < cfg.outer_mult * lr * 0.999) {
    radius *= 2.0;
    const RegionStat st = region(0.5, radius, decay_exp);
    total += st.sum;
    last_shell = st.sum;
  }
  // under |P a(eps, h)| ~ c(dir) d^{-(Q+alpha+1)} the mass beyond R equals
  // the last dyadic shell divided by 2^{(Q+alpha+1)p - Q} - 1
  const double pexp = decay_exp * atom.p - Q;  // positive by the alpha floor
  out.tail_bound = last_shell / (std::pow(2.0, pexp) - 1.0);
  out.value = total + out.tail_bound;
  out.tail_share = out.tail_bound / out.value;
  out.tail_dominates = out.tail_share > 0.2;
  return out;
}

inline std::vector<HpScanPoint> hp_scan(const KernelContext& ctx, const Atom& atom,
                                        const std::vector<double>& eps_grid,
                                        const HpScanConfig& cfg = {}) {
  std::vector<HpScanPoint> out;
  out.reserve(eps_grid.size());
  for (double eps : eps_grid) out.push_back(hp_scan_point(ctx, atom, eps, cfg));
  return out;
}

struct PointwiseBound {
  std::vector<double> eps;
  std::vector<double> value;        // |P a(eps, 0)|
  double fitted_exponent = 0.0;     // slope of log value vs log eps, eps -> 0
  double sup_scaled = 0.0;          // max value * eps^{(2n+1)/p}
  bool bound_respected = false;
};

/// Growth of |P a(eps, 0)| as eps -> 0 against the eps^{-(2n+1)/p} ceiling.
inline PointwiseBound pointwise_bound_check(const KernelContext& ctx, const Atom& a,
                                            const std::vector<double>& eps_list,
                                            int node_count = 8192) {
  const double expo = (2.0 * ctx.dim().n + 1.0) / a.p;
  const Atom::Nodes nodes = a.sample_nodes(node_count);
  PointwiseBound out;
  for (double eps : eps_list) {
    const double v =
        abs(project_atom_nodes(ctx, nodes, eps, GroupPoint(ctx.dim())).value);
    out.eps.push_back(eps);
    out.value.push_back(v);
    out.sup_scaled = std::max(out.sup_scaled, v * std::pow(eps, expo));
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < out.eps.size(); ++i)
    if (out.eps[i] <= 1.0 && out.value[i] > 0.0) {
      lx.push_back(std::log(out.eps[i]));
      ly.push_back(std::log(out.value[i]));
    }
  out.fitted_exponent = lx.size() >= 2 ? detail::fit_slope(lx, ly) : 0.0;
  out.bound_respected = out.fitted_exponent >= -expo - 0.3;
  return out;
}

struct CommutatorResult {
  std::vector<double> singular_values;  // descending
  double scale = 0.0;                   // Frobenius norm of the kernel stack
};

/// Discretized commutator block M_{xy} = (b(x) - b(y)) K((t,x),y) w_y over
/// quadrature nodes on a tile patch; the four real component matrices are
/// stacked and the singular values of the stack returned.
inline CommutatorResult commutator_matrix(const KernelContext& ctx,
                                          const std::function<double(const GroupPoint&)>& symbol,
                                          const std::vector<GroupPoint>& nodes,
                                          double weight, double t) {
  if (!(t > 0.0)) throw NotInDomain("commutator_matrix: t must be positive");
  const int n = static_cast<int>(nodes.size());
  if (n > 2000) throw TooManyNodes("commutator_matrix: node count above 2000");

  Eigen::MatrixXd stacked(4 * n, n);
  double frob2 = 0.0;
  std::vector<double> b_of(n);
  for (int i = 0; i < n; ++i) b_of[i] = symbol(nodes[i]);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const Quaternion k = kernel_upper(ctx, t, nodes[r], nodes[c]) * weight;
      const double db = b_of[r] - b_of[c];
      stacked(r, c) = db * k.w;
      stacked(n + r, c) = db * k.x;
      stacked(2 * n + r, c) = db * k.y;
      stacked(3 * n + r, c) = db * k.z;
      frob2 += norm_sq(k);
    }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked);
  CommutatorResult out;
  out.singular_values.assign(svd.singularValues().data(),
                             svd.singularValues().data() + svd.singularValues().size());
  out.scale = std::sqrt(frob2);
  return out;
}

/// Equal-weight node cloud on a tile for the commutator battery.
inline std::pair<std::vector<GroupPoint>, double> tile_patch_nodes(
    const BasicTileData& btd, const TileAddress& addr, int count) {
  const QmcSequence seq(btd.dim.topdim());
  std::vector<GroupPoint> pts;
  pts.reserve(count);
  std::vector<double> u(btd.dim.topdim());
  for (int k = 0; k < count; ++k) {
    for (int d = 0; d < btd.dim.topdim(); ++d) u[d] = seq.coord(k, d);
    pts.push_back(tile_sample(btd, addr, u));
  }
  const double vol = std::pow(tile_width(addr), btd.dim.hom_dim());
  return {pts, vol / count};
}

}  // namespace qszego

#endif
