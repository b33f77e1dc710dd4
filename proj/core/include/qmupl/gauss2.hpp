#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qmupl/gauss1.hpp"
#include "qmupl/stochastic.hpp"

namespace qmupl {

/// Superposition of two Gaussians sharing the width parameter a.
struct DoubleGaussianState {
  complex a{1.0, 0.0};
  double x_bar_1 = 0;
  double x_bar_2 = 0;
  double k_bar_1 = 0;
  double k_bar_2 = 0;
  complex gamma_1{0.0, 0.0};
  complex gamma_2{0.0, 0.0};
  double t = 0;

  void validate() const;
  [[nodiscard]] double X() const { return x_bar_2 - x_bar_1; }
  [[nodiscard]] double K() const { return k_bar_2 - k_bar_1; }
  [[nodiscard]] complex Gamma() const { return gamma_2 - gamma_1; }
  [[nodiscard]] GaussianState first() const { return {a, x_bar_1, k_bar_1, gamma_1, t}; }
  [[nodiscard]] GaussianState second() const { return {a, x_bar_2, k_bar_2, gamma_2, t}; }

  /// Two packets centred at -X0/2 and +X0/2 with equal weights and the
  /// given Gamma^R offset split symmetrically between them.
  static DoubleGaussianState symmetric(complex a, double X0, double K0 = 0.0, double gamma_r = 0.0);
};

struct CollapseVariables {
  double X = 0;
  double K = 0;
  double gamma_r = 0;
  double gamma_i = 0;
  double Y = 0;
  double theta = 0;
  double log_h = 0;  // h itself underflows for macroscopic separations
  double h = 0;
  double delta = 0;
};

CollapseVariables collapse_variables(const DoubleGaussianState& s);

/// Normalized <q> of the superposition.
double quantum_mean_double(const DoubleGaussianState& s);
/// Squared norm in log form: log of int |phi_1 + phi_2|^2 dx.
double log_norm_squared_double(const DoubleGaussianState& s);

/// Correction term g_t of the Gamma^R equation. Exactly zero when h
/// underflows relative to cosh Gamma^R.
double g_term(const CollapseVariables& v, const Model& model);
/// lambda (|X|+|Y|)^2 / (exp(aR (|X|+|Y|)^2 / 4) - 1); +inf when X = Y = 0.
double g_bound_overlap(const CollapseVariables& v, double a_real, const Model& model);
/// log of c = 1 / (exp(a_m X_m^2 / 4) - 1), finite for any positive input.
double log_c_bound(double a_min, double x_min);
double c_bound(double a_min, double x_min);

/// Deterministic separation dynamics: dX = -A1 X + (hbar/m) K, dK = -A2 X.
struct XKState {
  double X = 0;
  double K = 0;
  double t = 0;
};

/// A1 = lambda / aR, A2 = -2 lambda aI / aR.
std::array<double, 2> separation_coefficients(complex a, const Model& model);

/// RK4 with at least `min_steps` steps; the width comes from a_exact.
XKState xk_evolve(double X0, double K0, complex a0, const Model& model, double t, std::size_t min_steps = 4096);
std::vector<XKState> xk_trajectory(double X0, double K0, complex a0, const Model& model,
                                   std::span<const double> times, std::size_t steps_per_interval = 64);
/// X0 exp(-omega t/2) [cos(omega t/2) - sin(omega t/2)].
double situation_a_separation(double X0, double t, const Model& model);

struct AInfinitySystem {
  std::array<std::array<double, 2>, 2> matrix{};
  std::array<complex, 2> eigenvalues{};
  [[nodiscard]] double trace() const { return matrix[0][0] + matrix[1][1]; }
  [[nodiscard]] double determinant() const { return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]; }
};

/// Eigenvalues from the characteristic polynomial of the matrix.
AInfinitySystem a_infinity_system(const Model& model);

/// Gamma^R after one Euler-Maruyama step of
/// dGamma = lambda X^2 tanh(Gamma) dt + g dt + sqrt(lambda) X dW.
double gamma_full_step(const DoubleGaussianState& s, double dW, double dt, const Model& model);

/// One step of both packets: the linear-equation parameter equations driven
/// by dxi = dW + 2 sqrt(lambda) <q> dt, with the width advanced exactly.
DoubleGaussianState step_double(const DoubleGaussianState& s, double dW, double dt, const Model& model);

struct DoubleSample {
  double t = 0;
  double X = 0;
  double gamma_r = 0;
  double mean_q = 0;
  double g = 0;
  double g_bound = 0;
  double gamma_r_direct = 0;  // same step taken through gamma_full_step
};

struct DoubleRun {
  std::vector<DoubleSample> samples;  // one per step, including t = 0
  DoubleGaussianState final_state;
  std::size_t bound_violations = 0;  // steps with |g| > overlap bound
  double max_route_gap = 0;          // max |per-packet Gamma^R - direct step|
};

DoubleRun simulate_double(const DoubleGaussianState& initial, const WienerPath& path, const Model& model);

struct HittingConfig {
  double b = constants::suppression_threshold;
  double b0 = 0;
  double eta = 1;

  /// |b0| < b and 0 < eta < b; throws PreconditionError otherwise.
  void validate() const;
};

struct HittingStats {
  double mean_S = 0;
  double var_S = 0;
  double p_collapse_2 = 0;
  double p_collapse_1 = 0;
  double p_deloc_bound = 0;
};

/// x^2 tanh^2 x + x tanh x - x^2.
double hitting_variance_F(double x);
HittingStats hitting_stats(const HittingConfig& config);

struct BornRule {
  double norm_ratio = 0;  // e^{2 gamma_2} / (e^{2 gamma_1} + e^{2 gamma_2})
  double exact = 0;       // (tanh b + tanh b0) / (2 tanh b)
  double tolerance = 0;   // 1 - tanh b
};

BornRule born_rule_check(double gamma_10_r, double gamma_20_r, double b);

enum class HitOutcome { lower = -1, merged = 0, upper = 1 };

struct HitResult {
  double hit_time = 0;
  HitOutcome outcome = HitOutcome::merged;
  [[nodiscard]] bool censored() const { return outcome == HitOutcome::merged; }
  [[nodiscard]] int sign() const { return static_cast<int>(outcome); }
};

struct ReducedOptions {
  /// Brownian-bridge crossing test between grid points.
  bool bridge = true;
  /// Constant added to the drift: tanh(Gamma) + drift_offset.
  double drift_offset = 0;
};

/// First exit of dG = tanh G ds + dW from (-b, b), started at b0, on the
/// interval [0, s_max]. Outcome `merged` when s_max is reached first.
HitResult simulate_reduced_gamma(const HittingConfig& config, double s_max, double dt_s, std::uint64_t seed,
                                 std::uint64_t index, const ReducedOptions& options = {});

struct DelocalizationResult {
  HitResult hit;
  bool dipped = false;  // came back by eta after the hit, within the horizon
};

/// Runs to the first hit, then continues from +-b for `s_after` more and
/// records whether |G| falls to b - eta.
DelocalizationResult simulate_delocalization(const HittingConfig& config, double s_max, double s_after, double dt_s,
                                             std::uint64_t seed, std::uint64_t index,
                                             const ReducedOptions& options = {});

struct SandwichReport {
  std::size_t paths = 0;
  std::size_t steps_checked = 0;
  std::size_t violations = 0;
  double max_violation = 0;
  /// Mean first-passage time to +b for G-, G~, G+ over paths where all
  /// three reached it; pathwise T+ <= T~ <= T- holds when the sandwich does.
  double mean_upper_passage_minus = 0;
  double mean_upper_passage_mid = 0;
  double mean_upper_passage_plus = 0;
  std::size_t passage_paths = 0;
  std::size_t passage_order_violations = 0;
};

/// Same-noise simulation of the reduced equation and its two bounding
/// equations with drifts tanh(G) -+ c; checks G- <= G~ <= G+ at every step.
SandwichReport bounding_sandwich(double c, const HittingConfig& config, double s_max, double dt_s,
                                 std::uint64_t seed, std::size_t n_paths);

struct FullSandwichReport {
  std::size_t paths = 0;
  std::size_t steps_checked = 0;
  std::size_t violations = 0;  // Gamma outside [Gamma-, Gamma+]
  std::size_t bound_failures = 0;  // |g| > c lambda X^2 on a checked step
  double max_violation = 0;
};

/// Full double-Gaussian dynamics against the bounding equations
/// dG+- = lambda X^2 (tanh G+- +- c) dt + sqrt(lambda) X dW. Each path
/// stops once aR X^2 drops below a_min x_min^2, where c stops applying.
FullSandwichReport full_sandwich(const DoubleGaussianState& initial, double a_min, double x_min, double horizon,
                                 double dt, const Model& model, std::uint64_t seed, std::size_t n_paths);

}  // namespace qmupl
