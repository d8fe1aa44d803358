#ifndef QSZEGO_RATIONAL_FORM_HPP
#define QSZEGO_RATIONAL_FORM_HPP

#include <array>
#include <map>

#include "qszego/quaternion.hpp"

namespace qszego {

/// Polynomial in (x1, x2, x3, x4) with quaternion coefficients.
class QPoly4 {
 public:
  using Key = std::array<int, 4>;

  static QPoly4 conj_coordinate() {  // x1 - x2 i - x3 j - x4 k
    QPoly4 p;
    p.add({1, 0, 0, 0}, Quaternion::real(1.0));
    p.add({0, 1, 0, 0}, {0, -1, 0, 0});
    p.add({0, 0, 1, 0}, {0, 0, -1, 0});
    p.add({0, 0, 0, 1}, {0, 0, 0, -1});
    return p;
  }
  static QPoly4 norm_sq_poly() {  // x1^2 + x2^2 + x3^2 + x4^2
    QPoly4 p;
    p.add({2, 0, 0, 0}, Quaternion::real(1.0));
    p.add({0, 2, 0, 0}, Quaternion::real(1.0));
    p.add({0, 0, 2, 0}, Quaternion::real(1.0));
    p.add({0, 0, 0, 2}, Quaternion::real(1.0));
    return p;
  }

  void add(const Key& k, Quaternion c) {
    auto it = terms_.find(k);
    if (it == terms_.end())
      terms_.emplace(k, c);
    else {
      it->second = it->second + c;
      if (norm_sq(it->second) == 0.0) terms_.erase(it);
    }
  }

  QPoly4 operator+(const QPoly4& o) const {
    QPoly4 r = *this;
    for (const auto& [k, c] : o.terms_) r.add(k, c);
    return r;
  }
  QPoly4 operator*(double s) const {
    QPoly4 r;
    for (const auto& [k, c] : terms_) r.add(k, c * s);
    return r;
  }
  QPoly4 operator*(const QPoly4& o) const {
    QPoly4 r;
    for (const auto& [k, c] : terms_)
      for (const auto& [l, d] : o.terms_)
        r.add({k[0] + l[0], k[1] + l[1], k[2] + l[2], k[3] + l[3]}, c * d);
    return r;
  }

  QPoly4 d_x1() const {
    QPoly4 r;
    for (const auto& [k, c] : terms_)
      if (k[0] > 0) r.add({k[0] - 1, k[1], k[2], k[3]}, c * static_cast<double>(k[0]));
    return r;
  }
  QPoly4 mul_x1() const {
    QPoly4 r;
    for (const auto& [k, c] : terms_) r.add({k[0] + 1, k[1], k[2], k[3]}, c);
    return r;
  }

  int degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k[0] + k[1] + k[2] + k[3]);
    return d;
  }

  Quaternion eval(Quaternion q) const {
    const std::array<double, 4> v{q.w, q.x, q.y, q.z};
    Quaternion s{};
    for (const auto& [k, c] : terms_) {
      double m = 1.0;
      for (int i = 0; i < 4; ++i)
        for (int e = 0; e < k[i]; ++e) m *= v[i];
      s = s + c * m;
    }
    return s;
  }

 private:
  std::map<Key, Quaternion> terms_;
};

/// Quotient P(x) / |sigma|^{2m}, closed under d/dx1:
///   d/dx1 (P / |s|^{2m}) = (P' |s|^2 - 2 m x1 P) / |s|^{2(m+1)}.
struct RationalQForm {
  QPoly4 numerator;
  int denom_power = 0;  // m, denominator |sigma|^{2m}

  static RationalQForm seed() {  // conj(sigma) / |sigma|^4
    return {QPoly4::conj_coordinate(), 2};
  }

  RationalQForm d_x1() const {
    QPoly4 next = numerator.d_x1() * QPoly4::norm_sq_poly() +
                  numerator.mul_x1() * (-2.0 * denom_power);
    return {next, denom_power + 1};
  }

  Quaternion eval(Quaternion q) const {
    const double n2 = norm_sq(q);
    double denom = 1.0;
    for (int i = 0; i < denom_power; ++i) denom *= n2;
    return numerator.eval(q) / denom;
  }
};

}  // namespace qszego

#endif
