#ifndef QSZEGO_ATOMS_HPP
#define QSZEGO_ATOMS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "qszego/group.hpp"
#include "qszego/polynomial.hpp"
#include "qszego/rng.hpp"

namespace qszego {

namespace quad1d {

struct Rule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

/// Gauss-Legendre rule on (-1,1) by Newton iteration on the Legendre
/// recurrence.
inline Rule gauss_legendre(int order) {
  Rule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(3.141592653589793 * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.weights[i] = w;
    r.nodes[order - 1 - i] = x;
    r.weights[order - 1 - i] = w;
  }
  return r;
}

inline const Rule& cached(int order) {
  static std::map<int, Rule> rules;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = rules.find(order);
  if (it == rules.end()) it = rules.emplace(order, gauss_legendre(order)).first;
  return it->second;
}

}  // namespace quad1d

/// C-infinity bump on (-1,1), value 1 at 0.
inline double bump(double v) {
  const double v2 = v * v;
  if (v2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - v2));
}

/// Moment table of the bump: c_k = int_{-1}^{1} w^k bump(w) dw.
inline double bump_moment(int k, int gl_order) {
  if (k % 2 == 1) return 0.0;
  const auto& rule = quad1d::cached(gl_order);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * std::pow(rule.nodes[i], k) * bump(rule.nodes[i]);
  return s;
}

/// Node layout for integrating against an atom: low-discrepancy points over
/// the support box with equal weights.
struct QuadratureSpec {
  int count = 200000;
  std::uint64_t seed = 0;

  bool operator==(const QuadratureSpec& o) const {
    return count == o.count && seed == o.seed;
  }
};

/// Compactly supported quaternion-valued function with vanishing moments up
/// to homogeneous degree alpha, represented in closed form as
///   a(g) = lambda * prod_i bump(u_i / h_i) * R(u / h),   u = center^{-1} g,
/// with R a polynomial in the normalized box coordinates. Moments are
/// enforced on R in normalized coordinates, so translations and dilations
/// act on (center, h, lambda) only.
class Atom {
 public:
  GroupPoint center;
  double radius = 1.0;
  double p = 1.0;
  int alpha = 0;
  double hy = 0.0, ht = 0.0;   // box half-widths along y and t axes
  double lambda = 1.0;
  QPolynomial shape;           // polynomial in normalized coordinates
  QuadratureSpec quad;
  std::uint64_t seed = 0;

  explicit Atom(GroupDim d) : center(d), shape(d) {}

  GroupDim dim() const { return shape.dim(); }

  /// Box inscribed in the homogeneous ball of the given radius:
  /// (horiz hy^2)^2 + 3 ht^2 <= (0.98 r)^4.
  static std::pair<double, double> box_for_radius(GroupDim d, double r) {
    const double rr = 0.98 * r;
    const double hy = 0.5 * rr / std::sqrt(static_cast<double>(d.horiz()));
    const double ht = 0.4 * rr * rr;
    return {hy, ht};
  }

  double box_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim().horiz(); ++i) v *= 2.0 * hy;
    return v * std::pow(2.0 * ht, 3);
  }

  /// Normalized box coordinates of g, or nullopt outside the box.
  bool normalized_coords(const GroupPoint& g, GroupPoint& v) const {
    const GroupPoint u = group_mul(group_inv(center), g);
    v = GroupPoint(dim());
    for (int i = 0; i < dim().horiz(); ++i) {
      v.y[i] = u.y[i] / hy;
      if (!(std::fabs(v.y[i]) < 1.0)) return false;
    }
    for (int a = 0; a < 3; ++a) {
      v.t[a] = u.t[a] / ht;
      if (!(std::fabs(v.t[a]) < 1.0)) return false;
    }
    return true;
  }

  Quaternion value(const GroupPoint& g) const {
    GroupPoint v(dim());
    if (!normalized_coords(g, v)) return {};
    double b = 1.0;
    for (int i = 0; i < dim().horiz(); ++i) b *= bump(v.y[i]);
    for (int a = 0; a < 3; ++a) b *= bump(v.t[a]);
    return shape.eval(v) * (lambda * b);
  }

  /// Left-translated atom, supported on B(h . center, radius).
  Atom translated(const GroupPoint& h) const {
    Atom a = *this;
    a.center = group_mul(h, center);
    return a;
  }

  /// eps^{Q/2p} a(delta_{sqrt eps} g): an atom of radius r / sqrt(eps).
  Atom dilated(double eps) const {
    const double s = std::sqrt(eps);
    Atom a = *this;
    a.center = dilate(1.0 / s, center);
    a.radius = radius / s;
    a.hy = hy / s;
    a.ht = ht / eps;
    a.lambda = lambda * std::pow(eps, dim().hom_dim() / (2.0 * p));
    return a;
  }

  /// Quadrature nodes over the support box with equal weights; the node in
  /// normalized coordinates is shared across translates and dilates of the
  /// same atom.
  struct Nodes {
    std::vector<GroupPoint> points;
    std::vector<Quaternion> values;
    double weight = 0.0;
  };

  Nodes sample_nodes(int count = 0) const {
    if (count <= 0) count = quad.count;
    const GroupDim d = dim();
    const QmcSequence seq(d.topdim());
    const CounterRng shift_rng(quad.seed, "atom.nodes");
    std::vector<double> shift(d.topdim());
    for (int i = 0; i < d.topdim(); ++i) shift[i] = shift_rng.uniform(i);

    Nodes out;
    out.points.reserve(count);
    out.values.reserve(count);
    out.weight = box_volume() / count;
    std::vector<GroupPoint> vcoords(count, GroupPoint(d));
    std::vector<double> bumps(count);
    for (int k = 0; k < count; ++k) {
      GroupPoint u(d);
      GroupPoint& v = vcoords[k];
      double b = 1.0;
      for (int i = 0; i < d.horiz(); ++i) {
        double c = seq.coord(k, i) + shift[i];
        c -= std::floor(c);
        v.y[i] = 2.0 * c - 1.0;
        u.y[i] = v.y[i] * hy;
        b *= bump(v.y[i]);
      }
      for (int a = 0; a < 3; ++a) {
        double c = seq.coord(k, d.horiz() + a) + shift[d.horiz() + a];
        c -= std::floor(c);
        v.t[a] = 2.0 * c - 1.0;
        u.t[a] = v.t[a] * ht;
      }
      bumps[k] = b;
      const GroupPoint g = group_mul(center, u);
      out.points.push_back(g);
      out.values.push_back(shape.eval(v) * (lambda * b));
    }
    project_out_node_moments(vcoords, bumps, out.values);
    return out;
  }

 private:
  /// Removes the node-sum moments of the sampled values along the monomials
  /// of homogeneous degree <= alpha (the projection in the quadrature inner
  /// product). The analytic moments already vanish, so the correction is of
  /// the node set's own integration-error size; without it the far field of
  /// the projected atom would be dominated by quadrature moment noise.
  void project_out_node_moments(const std::vector<GroupPoint>& vcoords,
                                const std::vector<double>& bumps,
                                std::vector<Quaternion>& values) const {
    const GroupDim d = dim();
    const auto basis = enumerate_indices(d, alpha);
    const int nb = static_cast<int>(basis.size());
    const int n = static_cast<int>(vcoords.size());
    if (n < 2 * nb)
      throw GramSingular(
          "sample_nodes: node count must be at least twice the moment basis "
          "size (" +
          std::to_string(nb) + ")");
    Eigen::MatrixXd P(n, nb);
    for (int j = 0; j < nb; ++j) {
      const auto mono = QPolynomial::monomial(d, basis[j], Quaternion::real(1.0));
      for (int k = 0; k < n; ++k) P(k, j) = mono.eval(vcoords[k]).w;
    }
    Eigen::VectorXd w(n);
    for (int k = 0; k < n; ++k) w(k) = bumps[k];
    // corrected values v - sum_j c_j b P_j must satisfy sum_k P_i v' = 0,
    // so G_{ij} = sum_k b_k P_i P_j against rhs_i = sum_k P_i v_k
    const Eigen::MatrixXd G = P.transpose() * w.asDiagonal() * P;
    Eigen::MatrixXd rhs(nb, 4);
    for (int c = 0; c < 4; ++c) {
      Eigen::VectorXd vc(n);
      for (int k = 0; k < n; ++k) vc(k) = values[k][c];
      rhs.col(c) = P.transpose() * vc;
    }
    const Eigen::MatrixXd sol = G.ldlt().solve(rhs);
    for (int k = 0; k < n; ++k) {
      Quaternion corr{};
      for (int j = 0; j < nb; ++j) {
        const double pj = P(k, j) * bumps[k];
        corr = corr + Quaternion{sol(j, 0), sol(j, 1), sol(j, 2), sol(j, 3)} * pj;
      }
      values[k] = values[k] - corr;
    }
  }

 public:
};

/// Volume of the unit homogeneous ball, low-discrepancy rejection estimate,
/// cached per (n, sample count).
struct BallVolume {
  double value = 0.0;
  double err_estimate = 0.0;
};

inline BallVolume unit_ball_volume(GroupDim dim, int samples = 0) {
  if (samples <= 0) samples = dim.n == 2 ? 2000000 : 4000000;
  static std::map<std::pair<int, int>, BallVolume> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(dim.n, samples);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const QmcSequence seq(dim.topdim());
  std::int64_t hits_half = 0, hits = 0;
  for (int k = 0; k < samples; ++k) {
    GroupPoint g(dim);
    for (int a = 0; a < 3; ++a) g.t[a] = 2.0 * seq.coord(k, a) - 1.0;
    for (int i = 0; i < dim.horiz(); ++i)
      g.y[i] = 2.0 * seq.coord(k, 3 + i) - 1.0;
    if (hom_norm(g) < 1.0) {
      ++hits;
      if (k < samples / 2) ++hits_half;
    }
  }
  const double box = std::pow(2.0, dim.topdim());
  BallVolume bv;
  bv.value = box * static_cast<double>(hits) / samples;
  const double half = box * 2.0 * static_cast<double>(hits_half) / samples;
  bv.err_estimate = std::max(std::fabs(bv.value - half), 1e-6 * bv.value);
  cache[key] = bv;
  return bv;
}

inline double ball_volume(GroupDim dim, double r) {
  if (!(r > 0.0)) throw BadScale("ball_volume: r must be positive");
  return unit_ball_volume(dim).value * std::pow(r, dim.hom_dim());
}

inline int moment_floor(GroupDim dim, double p) {
  return static_cast<int>(std::floor(dim.hom_dim() * (1.0 / p - 1.0)));
}

namespace detail {
/// int v^I prod bump dv over the normalized box, exactly factorized.
inline double factored_moment(GroupDim dim, const MultiIndex& I, int gl_order) {
  double m = 1.0;
  for (int v = 0; v < dim.topdim(); ++v) {
    m *= bump_moment(I.a[v], gl_order);
    if (m == 0.0) return 0.0;
  }
  return m;
}

/// Moments of the shape polynomial against the bump weight,
/// m_I = int v^I prod bump(v) R(v) dv.
inline Quaternion shape_moment(const QPolynomial& R, const MultiIndex& I,
                               int gl_order) {
  Quaternion s{};
  for (const auto& [J, c] : R.terms()) {
    MultiIndex K = I;
    for (int v = 0; v < K.nvars(); ++v) K.a[v] += J.a[v];
    const double m = factored_moment(R.dim(), K, gl_order);
    if (m != 0.0) s = s + c * m;
  }
  return s;
}
}  // namespace detail

inline constexpr int kGlConstruct = 64;
inline constexpr int kGlAudit = 96;

namespace detail {
/// Sup of |R(v)| * prod bump(v) over the normalized box: low-discrepancy scan
/// followed by coordinate ascent from the best seeds. The scan alone misses
/// localized peaks badly once the box dimension grows.
inline double estimate_shape_sup(const QPolynomial& R, int scan_points = 16384,
                                 int ascent_rounds = 60) {
  const GroupDim dim = R.dim();
  const QmcSequence seq(dim.topdim());
  auto value = [&](const GroupPoint& v) {
    double b = 1.0;
    for (int i = 0; i < dim.horiz(); ++i) b *= bump(v.y[i]);
    for (int a = 0; a < 3; ++a) b *= bump(v.t[a]);
    return b == 0.0 ? 0.0 : abs(R.eval(v)) * b;
  };
  GroupPoint best(dim);
  double best_v = 0.0;
  for (int k = 0; k < scan_points; ++k) {
    GroupPoint v(dim);
    for (int i = 0; i < dim.horiz(); ++i) v.y[i] = 2.0 * seq.coord(k, i) - 1.0;
    for (int a = 0; a < 3; ++a) v.t[a] = 2.0 * seq.coord(k, dim.horiz() + a) - 1.0;
    const double val = value(v);
    if (val > best_v) {
      best_v = val;
      best = v;
    }
  }
  double step = 0.25;
  for (int round = 0; round < ascent_rounds; ++round) {
    bool improved = false;
    for (int c = 0; c < dim.topdim(); ++c)
      for (double sgn : {1.0, -1.0}) {
        GroupPoint cand = best;
        double& slot = c < dim.horiz() ? cand.y[c] : cand.t[c - dim.horiz()];
        slot = std::clamp(slot + sgn * step, -0.999999, 0.999999);
        const double val = value(cand);
        if (val > best_v) {
          best_v = val;
          best = cand;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
    if (step < 1e-6) break;
  }
  return best_v;
}
}  // namespace detail

/// Builds a (p, infty, alpha)-atom: a random bump-times-polynomial seed minus
/// its projection onto the span of the monomials of homogeneous degree
/// <= alpha in the bump-weighted inner product, rescaled to sit within
/// [1/2, 1] of the sup bound.
inline Atom make_atom(GroupDim dim, const GroupPoint& g0, double r, double p,
                      int alpha, std::uint64_t seed, QuadratureSpec quad = {}) {
  if (!(p > 2.0 / 3.0 && p <= 1.0))
    throw NotInDomain("make_atom: p outside (2/3, 1]");
  if (alpha < moment_floor(dim, p))
    throw NotInDomain("make_atom: alpha below the moment floor");

  Atom a(dim);
  a.center = g0;
  a.radius = r;
  a.p = p;
  a.alpha = alpha;
  a.seed = seed;
  a.quad = quad;
  std::tie(a.hy, a.ht) = Atom::box_for_radius(dim, r);

  const auto basis = enumerate_indices(dim, alpha);        // moment monomials
  const auto rich = enumerate_indices(dim, alpha + 1);     // seed monomials
  const CounterRng rng(seed, "atom.shape");
  QPolynomial R(dim);
  for (std::size_t m = 0; m < rich.size(); ++m)
    R.add(rich[m],
          {rng.uniform(4 * m, -1, 1), rng.uniform(4 * m + 1, -1, 1),
           rng.uniform(4 * m + 2, -1, 1), rng.uniform(4 * m + 3, -1, 1)});

  const int nb = static_cast<int>(basis.size());
  Eigen::MatrixXd G(nb, nb);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      MultiIndex K = basis[i];
      for (int v = 0; v < K.nvars(); ++v) K.a[v] += basis[j].a[v];
      G(i, j) = detail::factored_moment(dim, K, kGlConstruct);
    }
  Eigen::MatrixXd rhs(nb, 4);
  for (int i = 0; i < nb; ++i) {
    const Quaternion m = detail::shape_moment(R, basis[i], kGlConstruct);
    rhs(i, 0) = m.w;
    rhs(i, 1) = m.x;
    rhs(i, 2) = m.y;
    rhs(i, 3) = m.z;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  if (!lu.isInvertible()) throw GramSingular("make_atom: moment Gram matrix singular");
  const Eigen::MatrixXd sol = lu.solve(rhs);
  for (int j = 0; j < nb; ++j)
    R.add(basis[j], -Quaternion{sol(j, 0), sol(j, 1), sol(j, 2), sol(j, 3)});
  a.shape = R;

  // scale to meet the sup bound within [1/2, 1]
  const double bound = std::pow(ball_volume(dim, r), -1.0 / p);
  const double sup = detail::estimate_shape_sup(R);
  if (sup == 0.0) throw GramSingular("make_atom: shape vanished after projection");
  a.lambda = 0.7 * bound / (1.05 * sup);
  return a;
}

struct AtomCheck {
  bool support_ok = false;
  bool sup_ok = false;
  bool moments_ok = false;
  double sup_found = 0.0;
  double sup_bound = 0.0;
  double worst_moment_rel = 0.0;            // relative to sup * |B|
  std::vector<double> moment_residuals;     // one per monomial, same scaling
  bool pass() const { return support_ok && sup_ok && moments_ok; }
};

/// Audits the three defining conditions on a denser rule than construction:
/// support inside the ball, sup bound, vanishing moments (both centered
/// monomials and translated group monomials).
inline AtomCheck check_atom(const Atom& a, int audit_points = 32768,
                            int gl_order = kGlAudit, double moment_tol = 1e-9) {
  const GroupDim dim = a.dim();
  AtomCheck out;
  out.sup_bound = std::pow(ball_volume(dim, a.radius), -1.0 / a.p);

  // (i) the support box sits inside the homogeneous ball
  double corner_y2 = 0.0;
  for (int i = 0; i < dim.horiz(); ++i) corner_y2 += a.hy * a.hy;
  const double corner4 = corner_y2 * corner_y2 + 3.0 * a.ht * a.ht;
  out.support_ok = corner4 < std::pow(a.radius, 4.0);

  // (ii) ascent-refined sup over a denser scan than construction
  out.sup_found =
      a.lambda * detail::estimate_shape_sup(a.shape, audit_points, 80);
  out.sup_ok = out.sup_found <= out.sup_bound * (1.0 + 1e-12);

  // (iii) moments in centered normalized coordinates, on the denser 1-D rule
  const double scale = out.sup_bound * ball_volume(dim, a.radius);
  const auto basis = enumerate_indices(dim, a.alpha);
  double box_scale = a.lambda;
  for (int i = 0; i < dim.horiz(); ++i) box_scale *= a.hy;
  box_scale *= a.ht * a.ht * a.ht;
  for (const auto& I : basis) {
    // physical moment of u^I: lambda * prod h^{I_v} * prod h * (v-moment)
    double hpow = box_scale;
    for (int v = 0; v < dim.topdim(); ++v)
      hpow *= std::pow(v < dim.horiz() ? a.hy : a.ht, I.a[v]);
    const Quaternion m = detail::shape_moment(a.shape, I, gl_order) * hpow;
    out.moment_residuals.push_back(abs(m) / scale);
    out.worst_moment_rel = std::max(out.worst_moment_rel, out.moment_residuals.back());
  }

  // translated group monomials reduce to centered ones; audit a few exactly
  const auto probe = enumerate_indices(dim, std::min(a.alpha, 2));
  for (std::size_t q = 0; q < probe.size(); q += 3) {
    const auto xi = QPolynomial::monomial(dim, probe[q], Quaternion::real(1.0));
    const QPolynomial shifted = xi.left_translate(a.center);  // xi(center . u)
    Quaternion m{};
    for (const auto& [J, c] : shifted.terms()) {
      double hpow = box_scale;
      for (int v = 0; v < dim.topdim(); ++v)
        hpow *= std::pow(v < dim.horiz() ? a.hy : a.ht, J.a[v]);
      m = m + c * detail::shape_moment(a.shape, J, gl_order) * hpow;
    }
    out.worst_moment_rel = std::max(out.worst_moment_rel, abs(m) / scale);
  }
  out.moments_ok = out.worst_moment_rel < moment_tol;
  return out;
}

}  // namespace qszego

#endif
