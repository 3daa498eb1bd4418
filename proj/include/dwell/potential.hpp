#pragma once

#include <cmath>

#include "dwell/core.hpp"

namespace dwell {

/// Symmetric double well V(x) = -(1/4) Omega^2 x^2 + lambda x^4.
/// Minima sit at +-x0 = +-Omega/sqrt(8 lambda), the barrier top at x = 0 has
/// height v0 = Omega^4/(64 lambda) above the minima, and the curvature at the
/// minima is exactly Omega^2. n_states = v0/omega is the semiclassical count
/// of states trapped in one well.
struct PotentialSpec {
  double omega = 0.0;
  double lambda = 0.0;
  double x0 = 0.0;
  double v0 = 0.0;
  double n_states = 0.0;

  double value(double x) const {
    const double x2 = x * x;
    return -0.25 * omega * omega * x2 + lambda * x2 * x2;
  }
  double derivative(double x) const {
    return -0.5 * omega * omega * x + 4.0 * lambda * x * x * x;
  }
  /// Ground-state width of the harmonic approximation around a minimum.
  double sigma_x() const { return 1.0 / std::sqrt(2.0 * omega); }
};

inline PotentialSpec build_potential(double omega, double v0) {
  require(omega > 0.0, "build_potential: omega must be positive");
  require(v0 > 0.0, "build_potential: v0 must be positive");
  PotentialSpec p;
  p.omega = omega;
  p.v0 = v0;
  p.lambda = std::pow(omega, 4) / (64.0 * v0);
  p.x0 = omega / std::sqrt(8.0 * p.lambda);
  p.n_states = v0 / omega;
  return p;
}

}  // namespace dwell
