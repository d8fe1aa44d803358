#ifndef QSZEGO_ATOM_CUSTOM_HPP
#define QSZEGO_ATOM_CUSTOM_HPP

#include <functional>

#include "qszego/atoms.hpp"

namespace qszego {

/// Audit of the three defining conditions for an arbitrary profile given as
/// a callable on centered offsets u (the function value at center . u).
/// Moments are estimated with antithetic low-discrepancy pairs over the
/// enclosing box, so odd profiles cancel exactly; the residual tolerance is
/// the estimator's own accuracy, far looser than for template atoms.
struct CustomAtomCheck {
  bool support_ok = true;
  bool sup_ok = false;
  bool moments_ok = false;
  double sup_found = 0.0;
  double sup_bound = 0.0;
  double worst_moment_rel = 0.0;
  bool pass() const { return support_ok && sup_ok && moments_ok; }
};

inline CustomAtomCheck check_atom_fn(
    GroupDim dim, const std::function<Quaternion(const GroupPoint&)>& profile,
    double radius, double p, int alpha, int samples = 200000,
    double moment_tol = 1e-3) {
  CustomAtomCheck out;
  out.sup_bound = std::pow(ball_volume(dim, radius), -1.0 / p);
  const auto basis = enumerate_indices(dim, alpha);
  const QmcSequence seq(dim.topdim());

  // box enclosing the support ball: |y_i| <= r, |t_a| <= r^2
  double cell = 1.0;
  for (int i = 0; i < dim.horiz(); ++i) cell *= 2.0 * radius;
  cell *= std::pow(2.0 * radius * radius, 3);

  std::vector<Quaternion> moments(basis.size());
  for (int k = 0; k < samples / 2; ++k) {
    GroupPoint u(dim);
    for (int a = 0; a < 3; ++a)
      u.t[a] = (2.0 * seq.coord(k, a) - 1.0) * radius * radius;
    for (int i = 0; i < dim.horiz(); ++i)
      u.y[i] = (2.0 * seq.coord(k, 3 + i) - 1.0) * radius;
    for (const GroupPoint& pt : {u, group_inv(u)}) {
      const Quaternion v = profile(pt);
      if (norm_sq(v) == 0.0) continue;
      if (hom_norm(pt) > radius) {
        out.support_ok = false;
        continue;
      }
      out.sup_found = std::max(out.sup_found, abs(v));
      for (std::size_t m = 0; m < basis.size(); ++m) {
        double mono = 1.0;
        for (int i = 0; i < dim.horiz(); ++i)
          for (int e = 0; e < basis[m].a[i]; ++e) mono *= pt.y[i];
        for (int a = 0; a < 3; ++a)
          for (int e = 0; e < basis[m].a[dim.horiz() + a]; ++e) mono *= pt.t[a];
        moments[m] = moments[m] + v * mono;
      }
    }
  }
  out.sup_ok = out.sup_found <= out.sup_bound * (1.0 + 1e-12);
  const double scale =
      out.sup_bound * ball_volume(dim, radius) * samples / cell;
  for (const Quaternion& m : moments)
    out.worst_moment_rel = std::max(out.worst_moment_rel, abs(m) / scale);
  out.moments_ok = out.worst_moment_rel < moment_tol;
  return out;
}

}  // namespace qszego

#endif
