#ifndef QSZEGO_FD_HPP
#define QSZEGO_FD_HPP

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "qszego/group.hpp"
#include "qszego/polynomial.hpp"

namespace qszego {

/// Finite-difference step policy. The homogeneous policy uses step h along y
/// and h^2 along t so that perturbations have comparable homogeneous norm;
/// the isotropic policy uses h in every coordinate (the residual batteries
/// state their convergence contracts for it).
struct FdPolicy {
  double hy = 1e-4;
  double ht = 1e-8;

  static FdPolicy homogeneous(double h) { return {h, h * h}; }
  static FdPolicy isotropic(double h) { return {h, h}; }

  void validate(double step_min) const {
    if (!(hy > step_min) || !(ht > step_min))
      throw StepTooSmall("FdPolicy: step below cancellation floor");
  }
};

namespace detail {
template <class F>
Quaternion central_y(F&& f, const GroupPoint& g, int var, double h) {
  GroupPoint gp = g, gm = g;
  gp.y[var] += h;
  gm.y[var] -= h;
  return (f(gp) - f(gm)) / (2.0 * h);
}
template <class F>
Quaternion central_t(F&& f, const GroupPoint& g, int alpha, double h) {
  GroupPoint gp = g, gm = g;
  gp.t[alpha] += h;
  gm.t[alpha] -= h;
  return (f(gp) - f(gm)) / (2.0 * h);
}
}  // namespace detail

/// One application of Y_j (1-based, vertical fields after the horizontal
/// ones) by central differences of the exact coefficient formula.
template <class F>
Quaternion apply_Y(GroupDim dim, int j, F&& f, const GroupPoint& g,
                   const FdPolicy& policy = {}, double step_min = 1e-12) {
  if (j < 1 || j > dim.topdim()) throw DimMismatch("apply_Y: bad field index");
  policy.validate(step_min);
  if (j > dim.horiz())
    return detail::central_t(f, g, j - dim.horiz() - 1, policy.ht);
  const int l = (j - 1) / 4, jj = (j - 1) % 4;
  Quaternion r = detail::central_y(f, g, j - 1, policy.hy);
  for (int alpha = 0; alpha < 3; ++alpha) {
    const auto& b = b_matrix(alpha + 1);
    double coeff = 0.0;
    for (int k = 0; k < 4; ++k)
      if (b[k][jj] != 0) coeff += 2.0 * b[k][jj] * g.y[4 * l + k];
    if (coeff != 0.0) r = r + coeff * detail::central_t(f, g, alpha, policy.ht);
  }
  return r;
}

struct FdResult {
  Quaternion value;
  double err_est = 0.0;
};

/// Richardson refinement over steps {h, h/2}; the reported estimate is the
/// change between the two extrapolation inputs.
template <class F>
FdResult apply_Y_refined(GroupDim dim, int j, F&& f, const GroupPoint& g,
                         const FdPolicy& policy = {}) {
  const Quaternion d1 = apply_Y(dim, j, f, g, policy);
  const FdPolicy half{policy.hy / 2.0, policy.ht / 2.0};
  const Quaternion d2 = apply_Y(dim, j, f, g, half);
  return {(d2 * 4.0 - d1) / 3.0, abs(d2 - d1) / 3.0};
}

/// Ordered composition Y^I = Y_1^{a_1} ... Y_{4n-1}^{a_{4n-1}} with the
/// lowest index outermost. FD operators commute only approximately, so the
/// order is fixed.
template <class F>
Quaternion apply_YI(GroupDim dim, const MultiIndex& I, F&& f, const GroupPoint& g,
                    const FdPolicy& policy = {}, int max_hom_degree = 4) {
  if (static_cast<int>(I.a.size()) != dim.topdim())
    throw DimMismatch("apply_YI: index arity");
  if (I.hom_degree(dim) > max_hom_degree)
    throw OrderTooHigh("apply_YI: homogeneous degree beyond FD stability limit");
  int v = 0;
  while (v < dim.topdim() && I.a[v] == 0) ++v;
  if (v == dim.topdim()) return f(g);
  const MultiIndex rest = I.bumped(v, -1);
  return apply_Y(
      dim, v + 1,
      [&](const GroupPoint& x) { return apply_YI(dim, rest, f, x, policy, max_hom_degree); },
      g, policy);
}

/// Sum of the 4n-4 horizontal second derivatives.
template <class F>
Quaternion sub_laplacian(GroupDim dim, F&& f, const GroupPoint& g,
                         const FdPolicy& policy = {}) {
  Quaternion s{};
  for (int j = 1; j <= dim.horiz(); ++j) {
    auto inner = [&](const GroupPoint& x) { return apply_Y(dim, j, f, x, policy); };
    s = s + apply_Y(dim, j, inner, g, policy);
  }
  return s;
}

/// The unique polynomial P of homogeneous degree <= k with
/// Y^I P(0) = Y^I f(g) for all d(I) <= k. The basis matrix (Y^I xi^J)(0) is
/// exact (symbolic); the right-hand side uses FD derivatives of f.
template <class F>
QPolynomial taylor_left(GroupDim dim, F&& f, const GroupPoint& g, int k,
                        const FdPolicy& policy = {}) {
  if (k > 2) throw OrderTooHigh("taylor_left: homogeneous degree limit is 2");
  const auto basis = enumerate_indices(dim, k);
  const int m = static_cast<int>(basis.size());
  Eigen::MatrixXd A(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      const auto xi = QPolynomial::monomial(dim, basis[c], Quaternion::real(1.0));
      A(r, c) = xi.apply_YI(basis[r]).eval(GroupPoint::zero(dim)).w;
    }
  Eigen::MatrixXd rhs(m, 4);
  for (int r = 0; r < m; ++r) {
    const Quaternion d = apply_YI(dim, basis[r], f, g, policy);
    rhs(r, 0) = d.w;
    rhs(r, 1) = d.x;
    rhs(r, 2) = d.y;
    rhs(r, 3) = d.z;
  }
  const Eigen::MatrixXd sol = A.partialPivLu().solve(rhs);
  QPolynomial p(dim);
  for (int c = 0; c < m; ++c)
    p.add(basis[c], {sol(c, 0), sol(c, 1), sol(c, 2), sol(c, 3)});
  return p;
}

}  // namespace qszego

#endif
