#ifndef QSZEGO_QUATERNION_HPP
#define QSZEGO_QUATERNION_HPP

#include <array>
#include <cmath>
#include <complex>
#include <ostream>

#include "qszego/config.hpp"
#include "qszego/errors.hpp"

namespace qszego {

/// Element of H with components along 1, i, j, k.
struct Quaternion {
  double w = 0.0;  // real part
  double x = 0.0;  // i
  double y = 0.0;  // j
  double z = 0.0;  // k

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}
  static constexpr Quaternion real(double r) { return {r, 0, 0, 0}; }
  static constexpr Quaternion unit_i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion unit_j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion unit_k() { return {0, 0, 0, 1}; }

  double operator[](int c) const { return c == 0 ? w : c == 1 ? x : c == 2 ? y : z; }
};

constexpr Quaternion operator+(Quaternion a, Quaternion b) {
  return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
}
constexpr Quaternion operator-(Quaternion a, Quaternion b) {
  return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
}
constexpr Quaternion operator-(Quaternion a) { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) {
  return {a.w * s, a.x * s, a.y * s, a.z * s};
}
constexpr Quaternion operator*(double s, Quaternion a) { return a * s; }
constexpr Quaternion operator/(Quaternion a, double s) {
  return {a.w / s, a.x / s, a.y / s, a.z / s};
}

/// Hamilton product.
constexpr Quaternion operator*(Quaternion a, Quaternion b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion conj(Quaternion q) { return {q.w, -q.x, -q.y, -q.z}; }
constexpr double norm_sq(Quaternion q) {
  return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}
inline double abs(Quaternion q) { return std::sqrt(norm_sq(q)); }
inline double imag_abs(Quaternion q) {
  return std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
}
inline Quaternion inverse(Quaternion q) { return conj(q) / norm_sq(q); }

inline std::ostream& operator<<(std::ostream& os, Quaternion q) {
  return os << '(' << q.w << ',' << q.x << ',' << q.y << ',' << q.z << ')';
}

/// Value x1 + x2*i confined to the i-slice of H.
using ComplexSlice = std::complex<double>;

constexpr Quaternion embed_slice(ComplexSlice z) { return {z.real(), z.imag(), 0, 0}; }

/// sigma * xi * conj(sigma) for a unit rotor sigma. Fixes the real part and
/// |Im xi|.
inline Quaternion quat_conj_by_unit(Quaternion sigma, Quaternion xi,
                                    const Tolerances& tol = {}) {
  if (std::fabs(abs(sigma) - 1.0) > tol.unit_rotor)
    throw NonUnitRotor("quat_conj_by_unit: |sigma| != 1");
  return sigma * xi * conj(sigma);
}

struct RotorSlice {
  Quaternion sigma;   // unit rotor with sigma * xi * conj(sigma) on the i-slice
  ComplexSlice slice; // xi_1 - |Im xi| * i
};

/// Rotates xi into the lower i-slice: sigma * xi * conj(sigma) = xi_1 - |Im xi| i.
/// The generic rotor is pure imaginary, sigma = y2 i + y3 j + y4 k with
///   y2 = sqrt((1 - xi2/|Im xi|)/2),  y3 = -xi3/(2 |Im xi| y2),  y4 = -xi4/(2 |Im xi| y2).
/// That form degenerates when xi3, xi4 -> 0 with xi2 > 0; there sigma = j works
/// (it maps i to -i). With xi2 <= 0 the input is already on the lower slice.
inline RotorSlice rotor_to_slice(Quaternion xi, const Tolerances& tol = {}) {
  const double im2 = xi.x * xi.x + xi.y * xi.y + xi.z * xi.z;
  if (im2 == 0.0) return {Quaternion::real(1.0), {xi.w, 0.0}};
  const double im = std::sqrt(im2);
  const double jk2 = xi.y * xi.y + xi.z * xi.z;
  if (jk2 < tol.rotor_degenerate * im2) {
    if (xi.x <= 0.0) return {Quaternion::real(1.0), {xi.w, -im}};
    return {Quaternion::unit_j(), {xi.w, -im}};
  }
  // 1 - xi2/|Im xi| loses precision for xi2 near |Im xi|; rewrite through
  // (im - xi2)(im + xi2) = xi3^2 + xi4^2.
  const double half =
      xi.x > 0.0 ? 0.5 * jk2 / (im * (im + xi.x)) : 0.5 * (im - xi.x) / im;
  const double y2 = std::sqrt(half);
  const double y3 = -xi.y / (2.0 * im * y2);
  const double y4 = -xi.z / (2.0 * im * y2);
  return {Quaternion{0.0, y2, y3, y4}, {xi.w, -im}};
}

/// 2x2 complex matrix, row major.
struct Complex2x2 {
  std::array<std::complex<double>, 4> m{};

  std::complex<double> operator()(int r, int c) const { return m[2 * r + c]; }
  std::complex<double>& operator()(int r, int c) { return m[2 * r + c]; }

  friend Complex2x2 operator*(const Complex2x2& a, const Complex2x2& b) {
    Complex2x2 r;
    r(0, 0) = a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0);
    r(0, 1) = a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1);
    r(1, 0) = a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0);
    r(1, 1) = a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1);
    return r;
  }
  std::complex<double> det() const { return m[0] * m[3] - m[1] * m[2]; }
};

/// Multiplicative embedding of H into C^{2x2}:
/// q -> [[x1+i x4, -x2-i x3], [x2-i x3, x1-i x4]].
inline Complex2x2 tau_embed(Quaternion q) {
  Complex2x2 r;
  r(0, 0) = {q.w, q.z};
  r(0, 1) = {-q.x, -q.y};
  r(1, 0) = {q.x, -q.y};
  r(1, 1) = {q.w, -q.z};
  return r;
}

}  // namespace qszego

#endif
