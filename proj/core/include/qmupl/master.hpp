#pragma once

#include <vector>

#include "qmupl/gauss1.hpp"

namespace qmupl {

/// Position density on a uniform grid.
struct DensityProfile {
  std::vector<double> x;
  std::vector<double> p;
  double t = 0;
  bool delta_regime = false;  // smoothing below grid resolution, p = pS

  [[nodiscard]] double dx() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
  /// Trapezoidal integral.
  [[nodiscard]] double integral() const;
};

/// exp[-(lambda/2) t (x^2 - (k/m) x t + k^2 t^2 / (3 m^2))], k a momentum.
double kernel_F(double k, double x, double t, const Model& model);

/// 3 m^2 / (2 hbar^2 lambda t^3). Throws ParameterError for t <= 0.
double alpha(const Model& model, double t);

/// p_t = Gaussian of variance 1/(2 alpha_t) convolved with pS. Returns pS
/// flagged as delta regime when 1/sqrt(alpha_t) < dx/10; throws
/// PreconditionError when it lies in [dx/10, dx).
DensityProfile density_convolve(const DensityProfile& pS, double t, const Model& model);

/// |psi|^2 of a freely spreading Gaussian (lambda ignored) on `x`.
DensityProfile pure_schrodinger_density(const GaussianState& initial, const std::vector<double>& x, double t,
                                        const Model& model);

/// Integral over [lo, hi] of the piecewise-linear interpolant of p.
/// Throws ParameterError if the interval leaves the grid.
double measure_mu(const DensityProfile& p, double lo, double hi);

/// sum |p1 - p2| dx on a shared grid.
double l1_distance(const std::vector<double>& p1, const std::vector<double>& p2, double dx);

}  // namespace qmupl
