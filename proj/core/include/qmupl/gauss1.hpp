#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qmupl/units.hpp"

namespace qmupl {

/// phi(x) = exp[-a (x - x_bar)^2 + i k_bar x + gamma].
struct GaussianState {
  complex a{1.0, 0.0};
  double x_bar = 0;
  double k_bar = 0;
  complex gamma{0.0, 0.0};
  double t = 0;

  /// Throws PreconditionError unless a has a positive, finite real part.
  void validate() const;
  /// exp(2 Re gamma) sqrt(pi / (2 Re a)), the squared L2 norm.
  [[nodiscard]] double norm_squared() const;
  [[nodiscard]] double log_norm_squared() const;
};

/// a_t = c tanh(b t + k) and its trigonometric-hyperbolic form.
struct RiccatiClosedForm {
  complex c;
  complex b;
  complex k;  // principal branch of artanh(a0 / c)
  double phi1 = 0;
  double phi2 = 0;
  double omega = 0;
  double lambda_over_omega = 0;

  /// Requires lambda > 0 and Re a0 > 0.
  RiccatiClosedForm(const Model& model, complex a0);

  /// tanh form with the principal-branch k. Loses accuracy when a0 is close
  /// to c (k large); a_exact() does not.
  [[nodiscard]] complex a_tanh(double t) const;
  /// Real/imaginary form in terms of the phases phi1, phi2. Falls back to the
  /// tanh form where cosh + cos <= 1e-12.
  [[nodiscard]] complex a_phases(double t) const;
  /// Spreads from the phase form; the boolean is true when the fallback was
  /// used.
  struct PhaseSpreads {
    double sigma_q = 0;
    double sigma_p = 0;
    bool fallback = false;
  };
  [[nodiscard]] PhaseSpreads spreads(double t, const Model& model) const;
};

/// Right-hand side of the width equation, lambda - (2 i hbar/m) a^2.
complex riccati_rhs(const Model& model, complex a);

/// a_t for t >= 0. Uses the addition formula for tanh so that a0 = a_inf
/// (where artanh diverges) is exact. Throws PreconditionError if Re a0 <= 0
/// or t < 0.
complex a_exact(double t, complex a0, const Model& model);

struct Spreads {
  double sigma_q = 0;
  double sigma_p = 0;
};

/// sigma_q = 1/(2 sqrt(aR)), sigma_p = hbar sqrt(|a|^2 / aR).
Spreads spreads_of(complex a, const Model& model);
Spreads spreads(double t, complex a0, const Model& model);

/// One Euler-Maruyama step of the peak position and wavenumber under the
/// physical noise dW. The width is advanced exactly; gamma is left alone.
GaussianState step_means(const GaussianState& s, double dW, double dt, const Model& model);
/// Same, with the width at the end of the step supplied by the caller.
GaussianState step_means(const GaussianState& s, double dW, double dt, const Model& model, complex a_next);

/// One Euler-Maruyama step of all parameters of a Gaussian that solves the
/// linear equation driven by d_xi. Includes the corrected gamma drifts.
GaussianState step_linear(const GaussianState& s, double d_xi, double dt, const Model& model,
                          complex a_next);

/// Increment of gamma over one step of the linear equation.
complex gamma_step(const GaussianState& s, double d_xi, double dt, const Model& model);

/// Drift of gamma in the linear equation, without the noise-correlated part
/// -2 sqrt(lambda) x_bar dt.
complex gamma_drift(const GaussianState& s, const Model& model);

struct CovarianceState {
  double c_q2 = 0;
  double c_qp = 0;
  double c_p2 = 0;
  double t = 0;
};

/// Covariance of (<q>, <p>) over the noise, from deterministic initial
/// data. RK4 with at least `min_steps` steps, the width taken from
/// a_exact at every stage.
CovarianceState covariance_evolution(double t, complex a0, const Model& model, std::size_t min_steps = 4096);
/// Same, sampled on `times` (sorted, non-negative).
std::vector<CovarianceState> covariance_series(std::span<const double> times, complex a0, const Model& model,
                                               std::size_t steps_per_interval = 64);

/// Closed forms valid for a = a_inf at all times.
CovarianceState stationary_covariance(double t, const Model& model);

struct EnergyLaw {
  double rate_analytic = 0;
  double rate_mc = 0;
  bool small_ensemble = false;
  std::string warning;
};

/// <H> = (hbar^2 k_bar^2 + sigma_p^2) / (2m) for one packet.
double packet_energy(const GaussianState& s, const Model& model);

/// Compares lambda hbar^2 / (2m) with the least-squares slope of the
/// ensemble mean energy. Fewer than 100 paths sets `small_ensemble`.
EnergyLaw energy_law(const Model& model, std::span<const double> times, std::span<const double> mean_energy,
                     std::size_t n_paths);

}  // namespace qmupl
