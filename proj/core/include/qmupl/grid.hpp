#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qmupl/gauss1.hpp"
#include "qmupl/gauss2.hpp"
#include "qmupl/spectral.hpp"
#include "qmupl/stochastic.hpp"

namespace qmupl {

/// Wavefunction sampled at x_j = -L/2 + j L/n, j = 0..n-1, periodic.
struct WaveGrid {
  std::size_t n_points = 0;
  double extent = 0;
  std::vector<complex> psi;
  double t = 0;

  /// n must be a power of two (>= 16) and L positive.
  WaveGrid(std::size_t n, double length);
  WaveGrid() = default;

  [[nodiscard]] double dx() const { return extent / static_cast<double>(n_points); }
  [[nodiscard]] double x(std::size_t j) const { return -0.5 * extent + static_cast<double>(j) * dx(); }
  [[nodiscard]] std::vector<double> positions() const;
  [[nodiscard]] std::vector<double> density() const;
};

double norm_squared(const WaveGrid& g);
/// Scales to unit norm and returns the squared norm found.
double normalize(WaveGrid& g);

/// Samples a (single or double) Gaussian on the grid and normalizes it.
WaveGrid gaussian_wave(std::size_t n, double length, const GaussianState& s);
WaveGrid double_gaussian_wave(std::size_t n, double length, const DoubleGaussianState& s);

/// Throws ContainmentError if max |psi| in either edge band (n/64 points)
/// reaches 1e-8 of the peak.
void check_containment(const WaveGrid& g);

/// sqrt(2 - 2 |<psi1|psi2>|) for normalized states, so a global phase does
/// not count. Grids must match.
double l2_distance(const WaveGrid& a, const WaveGrid& b);

struct GridMoments {
  double mean_q = 0;
  double var_q = 0;
  double mean_p = 0;
  double var_p = 0;
  double sigma_qp = 0;  // Re <(q - <q>) psi | (p - <p>) psi>
};

/// Position moments by quadrature, momentum moments spectrally.
GridMoments grid_moments(const WaveGrid& g, const Model& model);
double grid_mean_q(const WaveGrid& g);

struct DeltaADiagnostic {
  double delta_q = 0;
  double delta_p = 0;
  double sigma_qp = 0;
  double delta_A = 0;
};

/// Variance of A = q + (i - 1) p / (m omega).
DeltaADiagnostic delta_A(const WaveGrid& g, const Model& model);
/// Same quantity for a single Gaussian, from its width alone.
DeltaADiagnostic delta_A_gaussian(complex a, const Model& model);

/// Sum of |psi|^2 dx over grid points in [lo, hi]. Throws ParameterError
/// if the interval leaves the domain.
double interval_probability(const WaveGrid& g, double lo, double hi);
double interval_probability(const std::vector<double>& x, const std::vector<double>& density, double lo, double hi);

/// Split-step propagator for one trajectory.
class GridPropagator {
 public:
  GridPropagator(std::size_t n, double length, const Model& model, double dt);

  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] const Model& model() const { return model_; }

  /// exp(-i hbar k^2 fraction dt / (2m)) in Fourier space.
  void kinetic(WaveGrid& g, double fraction) const;
  /// exp[sqrt(lambda)(q - <q>) dW - lambda (q - <q>)^2 dt] with <q> taken
  /// from `g`; returns that <q>.
  double collapse_nonlinear(WaveGrid& g, double dW) const;
  /// exp[sqrt(lambda) q dxi - lambda q^2 dt]; returns the normalized <q>
  /// before the factor was applied.
  double collapse_linear(WaveGrid& g, double d_xi) const;

 private:
  Fft fft_;
  Model model_;
  double dt_;
  std::vector<complex> half_phase_;
  std::vector<complex> full_phase_;
  std::vector<double> x_;
};

struct GridRunOptions {
  /// The observer runs at t = 0, every `record_every` steps and at the end.
  std::size_t record_every = 0;
  std::function<void(const WaveGrid&, std::size_t step)> observer;
  /// Containment is checked at every record point and every this many steps.
  std::size_t containment_every = 64;
};

struct NonlinearRun {
  WaveGrid final;
  double max_norm_drift = 0;  // max |1 - ||psi||^2| before renormalizing
  std::vector<double> mean_history;  // <q> used in each collapse factor
};

/// Strang splitting: kinetic half step, collapse factor, kinetic half
/// step, renormalize.
NonlinearRun evolve_nonlinear(const WaveGrid& psi0, const Model& model, const WienerPath& path,
                              const GridRunOptions& options = {});

struct LinearRun {
  WaveGrid final;                    // normalized
  std::vector<double> log_norm;      // log ||phi||^2 after each step
  std::vector<double> mean_history;  // normalized <q> at each collapse factor
  WienerPath physical_noise;         // xi shifted by the Girsanov drift
};

/// Linear equation driven by xi, with log-norm bookkeeping, followed by the
/// noise change to the physical Wiener process.
LinearRun evolve_linear_then_normalize(const WaveGrid& psi0, const Model& model, const WienerPath& xi,
                                       const GridRunOptions& options = {});

struct CollapseConvergence {
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> stderr_;
  bool non_increasing = false;  // within the 2-standard-error band
  std::size_t worst_index = 0;  // largest rise, in standard errors
  double worst_rise = 0;
  double terminal_ratio = 0;  // mean.back() / mean.front()
  double late_decay_rate = 0;  // least-squares slope of -log mean over the last half
};

/// Judges an ensemble series of E[Delta A_t]: a rise from any earlier point
/// larger than 2 combined standard errors counts as non-monotone.
CollapseConvergence collapse_convergence_report(std::vector<double> t, std::vector<double> mean,
                                                std::vector<double> stderr_values, std::size_t n_paths);

}  // namespace qmupl
