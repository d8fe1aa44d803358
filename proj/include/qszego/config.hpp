#ifndef QSZEGO_CONFIG_HPP
#define QSZEGO_CONFIG_HPP

namespace qszego {

/// Central tolerance record. Defaults match the contracts of the individual
/// operations; scale all of them at once with scaled().
struct Tolerances {
  double unit_rotor = 1e-12;       // |sigma| deviation accepted by conjugation
  double rotor_degenerate = 1e-24; // (xi3^2+xi4^2) / |Im xi|^2 branch switch
  double diagonal = 1e-8;          // boundary-kernel rejection radius
  double near_zero_modulus = 1e-8; // |K| floor for |K|^p differentiation
  double fd_step_min = 1e-12;

  Tolerances scaled(double s) const {
    Tolerances t = *this;
    t.unit_rotor *= s;
    t.diagonal *= s;
    t.near_zero_modulus *= s;
    return t;
  }
};

}  // namespace qszego

#endif
