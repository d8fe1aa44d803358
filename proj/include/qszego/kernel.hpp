#ifndef QSZEGO_KERNEL_HPP
#define QSZEGO_KERNEL_HPP

#include <cmath>
#include <complex>

#include "qszego/config.hpp"
#include "qszego/errors.hpp"
#include "qszego/group.hpp"
#include "qszego/quaternion.hpp"
#include "qszego/rational_form.hpp"

namespace qszego {

/// Immutable evaluation context: dimension, normalization constant and the
/// fully differentiated rational form backing the brute-force oracle.
class KernelContext {
 public:
  explicit KernelContext(GroupDim dim, double c = 1.0, Tolerances tol = {})
      : dim_(dim), c_(c), tol_(tol), oracle_form_(RationalQForm::seed()) {
    if (c == 0.0) throw ZeroArgument("KernelContext: c must be nonzero");
    for (int i = 0; i < 2 * (dim.n - 1); ++i) oracle_form_ = oracle_form_.d_x1();
  }

  GroupDim dim() const { return dim_; }
  double c() const { return c_; }
  const Tolerances& tol() const { return tol_; }
  const RationalQForm& oracle_form() const { return oracle_form_; }

 private:
  GroupDim dim_;
  double c_;
  Tolerances tol_;
  RationalQForm oracle_form_;
};

namespace detail {
inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}
}  // namespace detail

/// Slice kernel in unified polar form,
///   s(r e^{i th}) = c (2n-2)! e^{i(2n-3)th} r^{-(2n+1)} sum_{k=0}^{2n-2} (k+1) e^{-2k i th}.
/// The sum is evaluated directly, so angles with e^{-2 i th} = 1 are regular.
inline ComplexSlice s_slice(const KernelContext& ctx, ComplexSlice z) {
  const double r = std::abs(z);
  if (r == 0.0) throw ZeroArgument("s_slice: zero argument");
  const int n = ctx.dim().n;
  const double theta = std::arg(z);
  const std::complex<double> wstep = std::polar(1.0, -2.0 * theta);
  std::complex<double> wk = 1.0, sum = 0.0;
  for (int k = 0; k <= 2 * n - 2; ++k) {
    sum += static_cast<double>(k + 1) * wk;
    wk *= wstep;
  }
  const std::complex<double> phase = std::polar(1.0, (2.0 * n - 3.0) * theta);
  return ctx.c() * detail::factorial(2 * n - 2) * phase * sum /
         std::pow(r, 2.0 * n + 1.0);
}

/// Half-plane series form (valid for Re z > 0), kept as an independent
/// cross-check path for the polar evaluator.
inline ComplexSlice s_slice_series(const KernelContext& ctx, ComplexSlice alpha) {
  if (!(alpha.real() > 0.0))
    throw NotInDomain("s_slice_series: requires positive real part");
  const int n = ctx.dim().n;
  const std::complex<double> z{alpha.real(), std::fabs(alpha.imag())};
  const std::complex<double> zb = std::conj(z);
  const std::complex<double> ab = std::conj(alpha);
  const double f = detail::factorial(2 * n - 2);
  std::complex<double> s = 0.0;
  for (int k = 0; k <= 2 * n - 2; ++k)
    s += f * static_cast<double>((2 * n - k - 1) * (k + 1)) * ab /
         (std::pow(z, 2 * n - k) * std::pow(zb, k + 2));
  for (int k = 0; k <= 2 * n - 3; ++k)
    s -= f * static_cast<double>((2 * n - k - 2) * (k + 1)) /
         (std::pow(z, 2 * n - k - 1) * std::pow(zb, k + 2));
  return ctx.c() * s;
}

/// s on a full quaternionic argument: rotate to the slice, evaluate, rotate
/// back, s(xi) = conj(sigma) s(xi_1 - |Im xi| i) sigma.
inline Quaternion s_quat(const KernelContext& ctx, Quaternion xi) {
  if (norm_sq(xi) == 0.0) throw ZeroArgument("s_quat: zero argument");
  const RotorSlice rs = rotor_to_slice(xi, ctx.tol());
  const Quaternion sv = embed_slice(s_slice(ctx, rs.slice));
  return conj(rs.sigma) * sv * rs.sigma;
}

/// Brute-force oracle: 2(n-1)-fold symbolic x1-derivative of
/// conj(sigma)/|sigma|^4, evaluated at xi. Ground truth for the closed forms.
inline Quaternion s_oracle(const KernelContext& ctx, Quaternion xi) {
  if (norm_sq(xi) == 0.0) throw ZeroArgument("s_oracle: zero argument");
  return ctx.oracle_form().eval(xi) * ctx.c();
}

/// Kernel argument for the pair ((t, g), g') in boundary coordinates,
///   sigma = t + |x|^2 + |y|^2 - 2 sum_k conj(y_k) x_k + (t_g - s_g') units.
inline Quaternion kernel_argument(GroupDim dim, double t, const GroupPoint& g,
                                  const GroupPoint& gp) {
  check_same_dim(g, gp);
  Quaternion cross{};
  for (int l = 0; l < dim.blocks(); ++l)
    cross = cross + conj(gp.block(l)) * g.block(l);
  Quaternion sigma;
  sigma.w = t + g.y_norm_sq() + gp.y_norm_sq() - 2.0 * cross.w;
  sigma.x = g.t[0] - gp.t[0] - 2.0 * cross.x;
  sigma.y = g.t[1] - gp.t[1] - 2.0 * cross.y;
  sigma.z = g.t[2] - gp.t[2] - 2.0 * cross.z;
  return sigma;
}

/// K((t, g), g') for t > 0, or its boundary limit for t = 0 off the diagonal.
inline Quaternion kernel_upper(const KernelContext& ctx, double t,
                               const GroupPoint& g, const GroupPoint& gp) {
  if (t < 0.0) throw NotInDomain("kernel_upper: negative height");
  if (t == 0.0 && dist(g, gp) < ctx.tol().diagonal)
    throw DiagonalSingularity("kernel_upper: boundary diagonal");
  return s_quat(ctx, kernel_argument(ctx.dim(), t, g, gp));
}

inline Quaternion kernel_upper(const KernelContext& ctx, const SiegelPoint& p,
                               const GroupPoint& gp) {
  return kernel_upper(ctx, p.height, p.g, gp);
}

/// Boundary kernel K(g) = s(|y|^2 + t1 i + t2 j + t3 k).
inline Quaternion kernel_boundary(const KernelContext& ctx, const GroupPoint& g) {
  if (g.is_zero()) throw ZeroArgument("kernel_boundary: zero argument");
  return s_quat(ctx, {g.y_norm_sq(), g.t[0], g.t[1], g.t[2]});
}

/// K(g, h) = K(h^{-1} g) on the boundary.
inline Quaternion kernel_pair(const KernelContext& ctx, const GroupPoint& g,
                              const GroupPoint& h) {
  return kernel_boundary(ctx, group_mul(group_inv(h), g));
}

}  // namespace qszego

#endif
