#ifndef QSZEGO_GROUP_HPP
#define QSZEGO_GROUP_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

#include "qszego/errors.hpp"
#include "qszego/quaternion.hpp"

namespace qszego {

inline constexpr int kMaxQuatDim = 8;                  // largest supported n
inline constexpr int kMaxHoriz = 4 * kMaxQuatDim - 4;  // horizontal slots

/// Dimensional data of the group underlying H^n.
struct GroupDim {
  int n = 2;

  explicit constexpr GroupDim(int n_ = 2) : n(n_) {
    if (n_ < 2 || n_ > kMaxQuatDim) throw DimMismatch("GroupDim: n out of range");
  }
  constexpr int horiz() const { return 4 * n - 4; }
  constexpr int vert() const { return 3; }
  constexpr int topdim() const { return 4 * n - 1; }
  constexpr int hom_dim() const { return 4 * n + 2; }  // Q
  constexpr int blocks() const { return n - 1; }
};

/// The three 4x4 structure matrices of the vertical form. Skew symmetric,
/// entries in {-1,0,1}.
inline const std::array<std::array<int, 4>, 4>& b_matrix(int alpha) {
  static constexpr std::array<std::array<int, 4>, 4> b1{{{0, 1, 0, 0},
                                                         {-1, 0, 0, 0},
                                                         {0, 0, 0, -1},
                                                         {0, 0, 1, 0}}};
  static constexpr std::array<std::array<int, 4>, 4> b2{{{0, 0, 1, 0},
                                                         {0, 0, 0, 1},
                                                         {-1, 0, 0, 0},
                                                         {0, -1, 0, 0}}};
  static constexpr std::array<std::array<int, 4>, 4> b3{{{0, 0, 0, 1},
                                                         {0, 0, -1, 0},
                                                         {0, 1, 0, 0},
                                                         {-1, 0, 0, 0}}};
  switch (alpha) {
    case 1: return b1;
    case 2: return b2;
    case 3: return b3;
    default: throw BadAlpha("b_matrix: alpha must be 1, 2 or 3");
  }
}

/// Point (t, y) with t vertical (3 slots) and y horizontal (4n-4 slots).
struct GroupPoint {
  std::array<double, 3> t{};
  std::array<double, kMaxHoriz> y{};
  int horiz = 0;

  GroupPoint() = default;
  explicit GroupPoint(GroupDim dim) : horiz(dim.horiz()) {}

  static GroupPoint zero(GroupDim dim) { return GroupPoint(dim); }

  bool is_zero() const {
    for (double v : t)
      if (v != 0.0) return false;
    for (int i = 0; i < horiz; ++i)
      if (y[i] != 0.0) return false;
    return true;
  }

  double y_norm_sq() const {
    double s = 0.0;
    for (int i = 0; i < horiz; ++i) s += y[i] * y[i];
    return s;
  }
  double t_norm_sq() const { return t[0] * t[0] + t[1] * t[1] + t[2] * t[2]; }

  /// Horizontal block l as a quaternion (coordinates 4l..4l+3).
  Quaternion block(int l) const {
    return {y[4 * l], y[4 * l + 1], y[4 * l + 2], y[4 * l + 3]};
  }
  void set_block(int l, Quaternion q) {
    y[4 * l] = q.w;
    y[4 * l + 1] = q.x;
    y[4 * l + 2] = q.y;
    y[4 * l + 3] = q.z;
  }
};

inline void check_same_dim(const GroupPoint& a, const GroupPoint& b) {
  if (a.horiz != b.horiz) throw DimMismatch("group points of different dimension");
}

/// B_alpha(u, v) = 2 sum_l sum_{j,k} b^alpha_{kj} u_{4l+k} v_{4l+j}.
/// Accumulated over skew pairs k < j, so B(u, -u) = 0 holds exactly.
inline std::array<double, 3> b_form(std::span<const double> u,
                                    std::span<const double> v) {
  std::array<double, 3> out{};
  const int nb = static_cast<int>(u.size()) / 4;
  for (int alpha = 1; alpha <= 3; ++alpha) {
    const auto& b = b_matrix(alpha);
    double s = 0.0;
    for (int l = 0; l < nb; ++l)
      for (int k = 0; k < 4; ++k)
        for (int j = k + 1; j < 4; ++j)
          if (b[k][j] != 0)
            s += b[k][j] * (u[4 * l + k] * v[4 * l + j] - u[4 * l + j] * v[4 * l + k]);
    out[alpha - 1] = 2.0 * s;
  }
  return out;
}

inline std::array<double, 3> b_form(const GroupPoint& g, const GroupPoint& h) {
  check_same_dim(g, h);
  return b_form(std::span<const double>(g.y.data(), g.horiz),
                std::span<const double>(h.y.data(), h.horiz));
}

/// Group law (t,y)(t',y') = (t + t' + B(y,y'), y + y').
inline GroupPoint group_mul(const GroupPoint& g, const GroupPoint& h) {
  check_same_dim(g, h);
  GroupPoint r;
  r.horiz = g.horiz;
  const auto bb = b_form(g, h);
  for (int a = 0; a < 3; ++a) r.t[a] = g.t[a] + h.t[a] + bb[a];
  for (int i = 0; i < g.horiz; ++i) r.y[i] = g.y[i] + h.y[i];
  return r;
}

inline GroupPoint group_inv(const GroupPoint& g) {
  GroupPoint r = g;
  for (auto& v : r.t) v = -v;
  for (int i = 0; i < r.horiz; ++i) r.y[i] = -r.y[i];
  return r;
}

/// Left translation tau_h(g) = h * g.
inline GroupPoint translate(const GroupPoint& h, const GroupPoint& g) {
  return group_mul(h, g);
}

/// Anisotropic dilation delta_r(t, y) = (r^2 t, r y).
inline GroupPoint dilate(double r, const GroupPoint& g) {
  if (!(r > 0.0)) throw BadScale("dilate: r must be positive");
  GroupPoint out = g;
  for (auto& v : out.t) v *= r * r;
  for (int i = 0; i < out.horiz; ++i) out.y[i] *= r;
  return out;
}

/// Homogeneous norm (|y|^4 + |t|^2)^{1/4}.
inline double hom_norm(const GroupPoint& g) {
  const double y2 = g.y_norm_sq();
  return std::pow(y2 * y2 + g.t_norm_sq(), 0.25);
}

/// d(g, h) = ||h^{-1} g||.
inline double dist(const GroupPoint& g, const GroupPoint& h) {
  return hom_norm(group_mul(group_inv(h), g));
}

/// Point (height, boundary point) of the product model R_+ x group.
struct SiegelPoint {
  double height = 1.0;
  GroupPoint g;

  SiegelPoint() = default;
  SiegelPoint(double height_, GroupPoint g_) : height(height_), g(std::move(g_)) {
    if (!(height > 0.0)) throw NotInDomain("SiegelPoint: height must be positive");
  }
};

/// (q_1, q') -> (q_1 - |q'|^2, q'). Domain: Re q_1 > |q'|^2.
inline SiegelPoint pi_map(GroupDim dim, std::span<const double> q) {
  if (static_cast<int>(q.size()) != 4 * dim.n) throw DimMismatch("pi_map: need 4n reals");
  GroupPoint g(dim);
  double yn2 = 0.0;
  for (int i = 0; i < dim.horiz(); ++i) {
    g.y[i] = q[4 + i];
    yn2 += q[4 + i] * q[4 + i];
  }
  g.t = {q[1], q[2], q[3]};
  const double height = q[0] - yn2;
  if (!(height > 0.0)) throw NotInDomain("pi_map: Re q_1 <= |q'|^2");
  return {height, g};
}

/// (t, t-vec, y) -> (t + |y|^2, t-vec, y) as 4n reals.
inline std::array<double, 4 * kMaxQuatDim> pi_inv(GroupDim dim, const SiegelPoint& p) {
  if (p.g.horiz != dim.horiz()) throw DimMismatch("pi_inv: dimension mismatch");
  std::array<double, 4 * kMaxQuatDim> q{};
  q[0] = p.height + p.g.y_norm_sq();
  q[1] = p.g.t[0];
  q[2] = p.g.t[1];
  q[3] = p.g.t[2];
  for (int i = 0; i < dim.horiz(); ++i) q[4 + i] = p.g.y[i];
  return q;
}

}  // namespace qszego

#endif
