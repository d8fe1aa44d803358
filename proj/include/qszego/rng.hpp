#ifndef QSZEGO_RNG_HPP
#define QSZEGO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace qszego {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Counter-based stream: draw k is a pure function of (seed, label, k), so
/// adding a battery never perturbs another battery's samples.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view label)
      : key_(splitmix64(seed ^ fnv1a64(label))) {}

  std::uint64_t bits(std::uint64_t k) const { return splitmix64(key_ ^ (k * 0xd1342543de82ef95ULL)); }

  /// Uniform in [0,1).
  double uniform(std::uint64_t k) const {
    return static_cast<double>(bits(k) >> 11) * 0x1.0p-53;
  }
  /// Uniform in [a,b).
  double uniform(std::uint64_t k, double a, double b) const {
    return a + (b - a) * uniform(k);
  }
  /// Standard normal (Box-Muller on two decorrelated lanes).
  double normal(std::uint64_t k) const {
    const double u1 = static_cast<double>((bits(2 * k) >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform(2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::uint64_t key_;
};

/// Additive-recurrence low-discrepancy sequence in [0,1)^dim
/// (x_k = frac(1/2 + k * alpha), alpha from the generalized golden ratio).
class QmcSequence {
 public:
  explicit QmcSequence(int dim) : alpha_(dim) {
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
    double a = 1.0 / phi;
    for (int d = 0; d < dim; ++d) {
      alpha_[d] = a - std::floor(a);
      a /= phi;
    }
  }

  int dim() const { return static_cast<int>(alpha_.size()); }

  /// Point k, coordinate d.
  double coord(std::uint64_t k, int d) const {
    const double v = 0.5 + static_cast<double>(k + 1) * alpha_[d];
    return v - std::floor(v);
  }

  std::vector<double> point(std::uint64_t k) const {
    std::vector<double> p(alpha_.size());
    for (int d = 0; d < dim(); ++d) p[d] = coord(k, d);
    return p;
  }

 private:
  std::vector<double> alpha_;
};

}  // namespace qszego

#endif
