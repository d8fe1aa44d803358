#ifndef QSZEGO_KERNEL_CHECKS_HPP
#define QSZEGO_KERNEL_CHECKS_HPP

#include <atomic>
#include <cmath>
#include <vector>

#include "qszego/fd.hpp"
#include "qszego/kernel.hpp"
#include "qszego/parallel.hpp"
#include "qszego/rng.hpp"

namespace qszego {

namespace detail {
inline double fit_slope(const std::vector<double>& logx,
                        const std::vector<double>& logy) {
  const std::size_t n = logx.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += logx[i];
    my += logy[i];
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (logx[i] - mx) * (logy[i] - my);
    den += (logx[i] - mx) * (logx[i] - mx);
  }
  return num / den;
}
}  // namespace detail

/// Rescales g to homogeneous norm `radius`.
inline GroupPoint to_sphere(const GroupPoint& g, double radius = 1.0) {
  const double nrm = hom_norm(g);
  if (nrm == 0.0) throw ZeroArgument("to_sphere: zero point");
  return dilate(radius / nrm, g);
}

/// Fits the log-log decay slope of |Y^I K((1,0), .)| along radial rays.
/// d(I) = 0 needs no differentiation; higher orders go through the FD fields
/// in the second kernel argument.
inline double decay_exponent(const KernelContext& ctx, const MultiIndex& I,
                             const std::vector<double>& radii = {},
                             int rays = 6, double fd_step = 1e-3) {
  const GroupDim dim = ctx.dim();
  if (I.hom_degree(dim) > 2) throw OrderTooHigh("decay_exponent: d(I) > 2");
  std::vector<double> rr = radii;
  if (rr.empty())
    for (double r = 10.0; r <= 1000.0 * 1.0001; r *= std::sqrt(10.0)) rr.push_back(r);

  auto f = [&](const GroupPoint& gp) {
    return kernel_upper(ctx, 1.0, GroupPoint(dim), gp);
  };
  const FdPolicy pol = FdPolicy::isotropic(fd_step);
  const QmcSequence seq(dim.topdim());

  double slope_sum = 0.0;
  for (int ray = 0; ray < rays; ++ray) {
    GroupPoint dir(dim);
    for (int a = 0; a < 3; ++a) dir.t[a] = 2.0 * seq.coord(ray, a) - 1.0;
    for (int i = 0; i < dim.horiz(); ++i)
      dir.y[i] = 2.0 * seq.coord(ray, 3 + i) - 1.0;
    dir = to_sphere(dir);

    std::vector<double> lx, ly;
    for (double r : rr) {
      const GroupPoint g = dilate(r, dir);
      const double v = I.order() == 0 ? abs(f(g)) : abs(apply_YI(dim, I, f, g, pol, 2));
      lx.push_back(std::log(r));
      ly.push_back(std::log(v));
    }
    slope_sum += detail::fit_slope(lx, ly);
  }
  return slope_sum / rays;
}

struct SphereMin {
  GroupPoint argmin;
  double value = 0.0;
  double noise_estimate = 0.0;
};

/// Quasi-Monte-Carlo scan of {||g|| = radius} followed by local coordinate
/// descent with renormalization. The minimum of |K| is asserted positive by
/// the batteries, not here.
inline SphereMin min_abs_on_sphere(const KernelContext& ctx, int samples,
                                   int refine_rounds = 60, double radius = 1.0,
                                   int threads = 0) {
  const GroupDim dim = ctx.dim();
  const QmcSequence seq(dim.topdim());
  if (threads <= 0) threads = default_threads();

  struct Best {
    double v = std::numeric_limits<double>::infinity();
    std::uint64_t k = 0;
  };
  const Best best = parallel_block_reduce<Best>(
      samples, 4096, threads, Best{},
      [&](std::size_t lo, std::size_t hi) {
        Best b;
        for (std::size_t k = lo; k < hi; ++k) {
          GroupPoint g(dim);
          for (int a = 0; a < 3; ++a) g.t[a] = 2.0 * seq.coord(k, a) - 1.0;
          for (int i = 0; i < dim.horiz(); ++i)
            g.y[i] = 2.0 * seq.coord(k, 3 + i) - 1.0;
          if (hom_norm(g) < 1e-6) continue;
          const double v = abs(kernel_boundary(ctx, to_sphere(g, radius)));
          if (v < b.v) b = {v, k};
        }
        return b;
      },
      [](Best a, Best b) { return a.v <= b.v ? a : b; });

  GroupPoint cur(dim);
  for (int a = 0; a < 3; ++a) cur.t[a] = 2.0 * seq.coord(best.k, a) - 1.0;
  for (int i = 0; i < dim.horiz(); ++i) cur.y[i] = 2.0 * seq.coord(best.k, 3 + i) - 1.0;
  cur = to_sphere(cur, radius);
  double curv = abs(kernel_boundary(ctx, cur));

  double step = 0.1 * radius;
  for (int round = 0; round < refine_rounds; ++round) {
    bool improved = false;
    for (int c = 0; c < dim.topdim(); ++c) {
      for (double sgn : {1.0, -1.0}) {
        GroupPoint cand = cur;
        if (c < 3)
          cand.t[c] += sgn * step * step;
        else
          cand.y[c - 3] += sgn * step;
        cand = to_sphere(cand, radius);
        const double v = abs(kernel_boundary(ctx, cand));
        if (v < curv) {
          cur = cand;
          curv = v;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
    if (step < 1e-9 * radius) break;
  }
  return {cur, curv, 1e-13 * curv + 1e-300};
}

/// Max over m of |Qbar_m K| / |K| at ((t,g), g'), all derivatives FD with
/// isotropic steps in (t, g). The vertical operator is
/// Qbar_0 = d_t + i d_{t1} + j d_{t2} + k d_{t3}; the horizontal ones are
/// Qbar_{l+1} = Y_{4l+1} + i Y_{4l+2} + j Y_{4l+3} + k Y_{4l+4}.
template <class F>
double cauchy_fueter_residual_of(GroupDim dim, F&& f, double t, const GroupPoint& g,
                                 double h) {
  const FdPolicy pol = FdPolicy::isotropic(h);
  auto fg = [&f, t](const GroupPoint& x) { return f(t, x); };

  const Quaternion dt = (f(t + h, g) - f(t - h, g)) / (2.0 * h);
  Quaternion q0 = dt;
  const Quaternion units[3] = {Quaternion::unit_i(), Quaternion::unit_j(),
                               Quaternion::unit_k()};
  for (int a = 0; a < 3; ++a)
    q0 = q0 + units[a] * apply_Y(dim, dim.horiz() + 1 + a, fg, g, pol);

  double worst = abs(q0);
  for (int l = 0; l < dim.blocks(); ++l) {
    Quaternion ql = apply_Y(dim, 4 * l + 1, fg, g, pol);
    for (int a = 0; a < 3; ++a)
      ql = ql + units[a] * apply_Y(dim, 4 * l + 2 + a, fg, g, pol);
    worst = std::max(worst, abs(ql));
  }
  const double scale = abs(f(t, g));
  return worst / (scale > 0.0 ? scale : 1.0);
}

inline double cauchy_fueter_residual(const KernelContext& ctx, const SiegelPoint& p,
                                     const GroupPoint& gp, double h) {
  auto f = [&](double t, const GroupPoint& g) { return kernel_upper(ctx, t, g, gp); };
  return cauchy_fueter_residual_of(ctx.dim(), f, p.height, p.g, h);
}

/// |(d_t - (1/(8(n-1))) sum Y_j^2) K| / |K| with the same stencil contract.
/// This is -L with L the parabolic operator (1/(8(n-1))) sum Y_j^2 - d_t;
/// L annihilates functions regular in (t, g).
template <class F>
double heat_residual_of(GroupDim dim, F&& f, double t, const GroupPoint& g, double h) {
  const FdPolicy pol = FdPolicy::isotropic(h);
  auto fg = [&f, t](const GroupPoint& x) { return f(t, x); };
  const Quaternion dt = (f(t + h, g) - f(t - h, g)) / (2.0 * h);
  const Quaternion lap = sub_laplacian(dim, fg, g, pol);
  const double scale = abs(f(t, g));
  return abs(dt - lap / (8.0 * (dim.n - 1))) / (scale > 0.0 ? scale : 1.0);
}

inline double heat_residual(const KernelContext& ctx, const SiegelPoint& p,
                            const GroupPoint& gp, double h) {
  auto f = [&](double t, const GroupPoint& g) { return kernel_upper(ctx, t, g, gp); };
  return heat_residual_of(ctx.dim(), f, p.height, p.g, h);
}

/// FD value of L |K|^pw with L = (1/(8(n-1))) sum Y_j^2 - d_t. Nonnegative
/// for 2/3 <= pw <= 1 wherever K != 0.
inline double subharmonicity_value(const KernelContext& ctx, const SiegelPoint& p,
                                   const GroupPoint& gp, double pw, double h) {
  if (!(pw >= 2.0 / 3.0 - 1e-12 && pw <= 1.0 + 1e-12))
    throw NotInDomain("subharmonicity_value: exponent outside [2/3, 1]");
  const GroupDim dim = ctx.dim();
  if (abs(kernel_upper(ctx, p.height, p.g, gp)) < ctx.tol().near_zero_modulus)
    throw NearZeroModulus("subharmonicity_value: |K| too small");
  const FdPolicy pol = FdPolicy::isotropic(h);
  auto mod_p = [&](const GroupPoint& g) {
    return Quaternion::real(std::pow(abs(kernel_upper(ctx, p.height, g, gp)), pw));
  };
  const double lap = sub_laplacian(dim, mod_p, p.g, pol).w;
  const double dtv = (std::pow(abs(kernel_upper(ctx, p.height + h, p.g, gp)), pw) -
                      std::pow(abs(kernel_upper(ctx, p.height - h, p.g, gp)), pw)) /
                     (2.0 * h);
  return lap / (8.0 * (dim.n - 1)) - dtv;
}

struct SubharmonicIdentity {
  double lhs = 0.0;  // 8(n-1) L |K|^p by direct FD
  double rhs = 0.0;  // assembled from FD first derivatives
};

/// Both sides of
///   8(n-1) L |f|^p = p(p-2)(f,f)^{p/2-2} sum (Re(Y_j f, f))^2
///                  + p(f,f)^{p/2-1} sum |Y_j f|^2
/// for f = K((., .), g').
inline SubharmonicIdentity subharmonic_identity(const KernelContext& ctx,
                                                const SiegelPoint& p,
                                                const GroupPoint& gp, double pw,
                                                double h) {
  const GroupDim dim = ctx.dim();
  const double lhs = 8.0 * (dim.n - 1) * subharmonicity_value(ctx, p, gp, pw, h);

  const FdPolicy pol = FdPolicy::isotropic(h);
  auto fg = [&](const GroupPoint& g) { return kernel_upper(ctx, p.height, g, gp); };
  const Quaternion f = fg(p.g);
  const double ff = norm_sq(f);
  double sum_re2 = 0.0, sum_abs2 = 0.0;
  for (int j = 1; j <= dim.horiz(); ++j) {
    const Quaternion yj = apply_Y(dim, j, fg, p.g, pol);
    const Quaternion inner = conj(yj) * f;  // (Y_j f, f)
    sum_re2 += inner.w * inner.w;
    sum_abs2 += norm_sq(yj);
  }
  const double rhs = pw * (pw - 2.0) * std::pow(ff, pw / 2.0 - 2.0) * sum_re2 +
                     pw * std::pow(ff, pw / 2.0 - 1.0) * sum_abs2;
  return {lhs, rhs};
}

}  // namespace qszego

#endif
