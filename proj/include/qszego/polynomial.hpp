#ifndef QSZEGO_POLYNOMIAL_HPP
#define QSZEGO_POLYNOMIAL_HPP

#include <algorithm>
#include <map>
#include <vector>

#include "qszego/group.hpp"
#include "qszego/quaternion.hpp"

namespace qszego {

/// Exponent vector over the 4n-1 coordinates (y_1..y_{4n-4}, t_1..t_3).
/// Vertical exponents count twice in the homogeneous degree d(I).
struct MultiIndex {
  std::vector<int> a;

  MultiIndex() = default;
  explicit MultiIndex(int nvars) : a(nvars, 0) {}

  int nvars() const { return static_cast<int>(a.size()); }
  int order() const {  // |I|
    int s = 0;
    for (int v : a) s += v;
    return s;
  }
  int hom_degree(GroupDim dim) const {  // d(I)
    int s = 0;
    for (int i = 0; i < nvars(); ++i) s += (i < dim.horiz() ? 1 : 2) * a[i];
    return s;
  }
  bool operator<(const MultiIndex& o) const { return a < o.a; }
  bool operator==(const MultiIndex& o) const { return a == o.a; }

  MultiIndex bumped(int var, int by = 1) const {
    MultiIndex r = *this;
    r.a[var] += by;
    return r;
  }
};

/// All multi-indices with d(I) <= kmax, ordered by (d(I), lexicographic).
inline std::vector<MultiIndex> enumerate_indices(GroupDim dim, int kmax) {
  std::vector<MultiIndex> out;
  MultiIndex cur(dim.topdim());
  auto rec = [&](auto&& self, int var, int budget) -> void {
    if (var == dim.topdim()) {
      out.push_back(cur);
      return;
    }
    const int cost = var < dim.horiz() ? 1 : 2;
    for (int e = 0; e * cost <= budget; ++e) {
      cur.a[var] = e;
      self(self, var + 1, budget - e * cost);
    }
    cur.a[var] = 0;
  };
  rec(rec, 0, kmax);
  std::sort(out.begin(), out.end(), [&](const MultiIndex& p, const MultiIndex& q) {
    const int dp = p.hom_degree(dim), dq = q.hom_degree(dim);
    if (dp != dq) return dp < dq;
    return p < q;
  });
  return out;
}

/// Polynomial on the group with quaternion coefficients, P = sum a_I xi^I.
class QPolynomial {
 public:
  explicit QPolynomial(GroupDim dim) : dim_(dim) {}

  static QPolynomial constant(GroupDim dim, Quaternion c) {
    QPolynomial p(dim);
    p.add(MultiIndex(dim.topdim()), c);
    return p;
  }
  static QPolynomial monomial(GroupDim dim, const MultiIndex& I, Quaternion c) {
    QPolynomial p(dim);
    p.add(I, c);
    return p;
  }
  /// The coordinate function with index var (0-based; vertical after horizontal).
  static QPolynomial coordinate(GroupDim dim, int var) {
    return monomial(dim, MultiIndex(dim.topdim()).bumped(var), Quaternion::real(1.0));
  }

  GroupDim dim() const { return dim_; }
  const std::map<MultiIndex, Quaternion>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(const MultiIndex& I, Quaternion c) {
    auto it = terms_.find(I);
    if (it == terms_.end())
      terms_.emplace(I, c);
    else {
      it->second = it->second + c;
      if (norm_sq(it->second) == 0.0) terms_.erase(it);
    }
  }

  int hom_degree() const {
    int d = 0;
    for (const auto& [I, c] : terms_) d = std::max(d, I.hom_degree(dim_));
    return d;
  }

  Quaternion eval(const GroupPoint& g) const {
    Quaternion s{};
    for (const auto& [I, c] : terms_) {
      double m = 1.0;
      for (int v = 0; v < dim_.horiz(); ++v)
        for (int e = 0; e < I.a[v]; ++e) m *= g.y[v];
      for (int a = 0; a < 3; ++a)
        for (int e = 0; e < I.a[dim_.horiz() + a]; ++e) m *= g.t[a];
      s = s + c * m;
    }
    return s;
  }

  QPolynomial operator+(const QPolynomial& o) const {
    QPolynomial r = *this;
    for (const auto& [I, c] : o.terms_) r.add(I, c);
    return r;
  }
  QPolynomial operator-(const QPolynomial& o) const {
    QPolynomial r = *this;
    for (const auto& [I, c] : o.terms_) r.add(I, -c);
    return r;
  }
  QPolynomial operator*(double s) const {
    QPolynomial r(dim_);
    for (const auto& [I, c] : terms_) r.add(I, c * s);
    return r;
  }
  QPolynomial operator*(const QPolynomial& o) const {
    QPolynomial r(dim_);
    for (const auto& [I, c] : terms_)
      for (const auto& [J, d] : o.terms_) {
        MultiIndex K = I;
        for (int v = 0; v < K.nvars(); ++v) K.a[v] += J.a[v];
        r.add(K, c * d);
      }
    return r;
  }

  /// Partial derivative along coordinate var.
  QPolynomial derivative(int var) const {
    QPolynomial r(dim_);
    for (const auto& [I, c] : terms_)
      if (I.a[var] > 0) r.add(I.bumped(var, -1), c * static_cast<double>(I.a[var]));
    return r;
  }

  /// Exact application of the left-invariant field Y_j (1-based). For
  /// horizontal j the vertical coefficients 2 sum_k b^a_{kj} y_{4l+k} are
  /// polynomial, so the result is again a polynomial.
  QPolynomial apply_Y(int j) const {
    if (j < 1 || j > dim_.topdim()) throw DimMismatch("apply_Y: bad index");
    if (j > dim_.horiz()) return derivative(dim_.horiz() + (j - dim_.horiz() - 1));
    const int l = (j - 1) / 4, jj = (j - 1) % 4;
    QPolynomial r = derivative(j - 1);
    for (int alpha = 1; alpha <= 3; ++alpha) {
      const auto& b = b_matrix(alpha);
      QPolynomial coeff(dim_);
      for (int k = 0; k < 4; ++k)
        if (b[k][jj] != 0)
          coeff = coeff + coordinate(dim_, 4 * l + k) * (2.0 * b[k][jj]);
      if (!coeff.empty())
        r = r + coeff * derivative(dim_.horiz() + (alpha - 1));
    }
    return r;
  }

  QPolynomial apply_YI(const MultiIndex& I) const {
    QPolynomial r = *this;
    for (int j = dim_.topdim(); j >= 1; --j)
      for (int e = 0; e < I.a[j - 1]; ++e) r = r.apply_Y(j);
    return r;
  }

  /// P(h . u) expanded as a polynomial in u.
  QPolynomial left_translate(const GroupPoint& h) const {
    std::vector<QPolynomial> repl;
    repl.reserve(dim_.topdim());
    for (int v = 0; v < dim_.horiz(); ++v)
      repl.push_back(constant(dim_, Quaternion::real(h.y[v])) + coordinate(dim_, v));
    for (int alpha = 0; alpha < 3; ++alpha) {
      QPolynomial p = constant(dim_, Quaternion::real(h.t[alpha]));
      p = p + coordinate(dim_, dim_.horiz() + alpha);
      const auto& b = b_matrix(alpha + 1);
      for (int l = 0; l < dim_.blocks(); ++l)
        for (int k = 0; k < 4; ++k) {
          if (h.y[4 * l + k] == 0.0) continue;
          for (int j = 0; j < 4; ++j)
            if (b[k][j] != 0)
              p = p + coordinate(dim_, 4 * l + j) * (2.0 * b[k][j] * h.y[4 * l + k]);
        }
      repl.push_back(p);
    }
    QPolynomial out(dim_);
    for (const auto& [I, c] : terms_) {
      QPolynomial m = constant(dim_, c);
      for (int v = 0; v < dim_.topdim(); ++v)
        for (int e = 0; e < I.a[v]; ++e) m = m * repl[v];
      out = out + m;
    }
    return out;
  }

  /// P(delta_r u): each monomial scales by r^{d(I)}.
  QPolynomial dilated(double r) const {
    QPolynomial out(dim_);
    for (const auto& [I, c] : terms_)
      out.add(I, c * std::pow(r, I.hom_degree(dim_)));
    return out;
  }

 private:
  GroupDim dim_;
  std::map<MultiIndex, Quaternion> terms_;
};

}  // namespace qszego

#endif
