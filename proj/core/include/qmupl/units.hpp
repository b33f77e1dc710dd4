#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace qmupl {

using complex = std::complex<double>;

/// CODATA-style defaults. The collapse constant is only known to one
/// significant figure, so magnitudes derived from it are order-of-magnitude.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double nucleon_mass = 1.67262192369e-27;  // kg
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
inline constexpr double gram = 1.0e-3;                     // kg
inline constexpr double earth_mass = 5.9722e24;            // kg
inline constexpr double lambda0 = 1.0e-2;                  // m^-2 s^-1
inline constexpr double suppression_threshold = 10.0;      // default b
}  // namespace constants

/// Physical inputs of the model, SI units.
struct ModelParams {
  double mass = constants::nucleon_mass;
  double reference_mass = constants::nucleon_mass;
  double lambda0 = constants::lambda0;
  double hbar = constants::hbar;

  /// Throws ParameterError unless every field is finite and strictly positive.
  void validate() const;
};

/// Presets: "electron", "nucleon", "gram", "earth". Throws ParameterError
/// for anything else.
ModelParams preset(std::string_view name);
/// A body made of `count` nucleons.
ModelParams nucleons(double count);
/// Names accepted by preset().
std::vector<std::string> preset_names();

/// Everything that follows from ModelParams, SI units.
struct DerivedConstants {
  ModelParams params;
  double lambda = 0;       // (m/m0) lambda0, m^-2 s^-1
  double omega = 0;        // 2 sqrt(hbar lambda0 / m0), s^-1, mass independent
  double length_unit = 0;  // sqrt(hbar / (m omega)), m
  double time_unit = 0;    // 1 / omega, s
  double sigma_q_inf = 0;  // m
  double sigma_p_inf = 0;  // kg m / s
  complex a_inf;           // (lambda/omega)(1 - i), m^-2
  double energy_rate = 0;  // lambda0 hbar^2 / (2 m0), J/s

  /// Collapse rate of a center of mass with total mass `total_mass`.
  [[nodiscard]] double lambda_cm(double total_mass) const;
};

DerivedConstants derive_constants(const ModelParams& p);

/// The three numbers the dynamics depends on, in whatever unit system the
/// caller works in. Every numerical routine takes one of these; the
/// dimensionless instance has hbar = m = omega = 1 and lambda = 1/4.
struct Model {
  double hbar = 1.0;
  double mass = 1.0;
  double lambda = 0.25;

  [[nodiscard]] double hbar_over_m() const { return hbar / mass; }
  /// 2 sqrt(lambda hbar / m). Zero in the Schrodinger limit.
  [[nodiscard]] double omega() const;
  /// Stationary width parameter (lambda/omega)(1 - i). Requires lambda > 0.
  [[nodiscard]] complex a_inf() const;
  [[nodiscard]] double sigma_q_inf() const;
  [[nodiscard]] double sigma_p_inf() const;

  /// Same model with the collapse switched off.
  [[nodiscard]] Model schrodinger() const { return {hbar, mass, 0.0}; }

  static Model si(const DerivedConstants& c);
  static Model dimensionless(const DerivedConstants& c);
};

/// SI <-> dimensionless conversions: time in 1/omega, length in the
/// stationary spread, momentum in hbar/length, energy in hbar omega.
class Scale {
 public:
  explicit Scale(const DerivedConstants& c);

  [[nodiscard]] double time_unit() const { return time_; }
  [[nodiscard]] double length_unit() const { return length_; }
  [[nodiscard]] double momentum_unit() const { return hbar_ / length_; }
  [[nodiscard]] double energy_unit() const { return hbar_ / time_; }

  [[nodiscard]] double time_to_si(double t) const { return t * time_; }
  [[nodiscard]] double time_from_si(double t) const { return t / time_; }
  [[nodiscard]] double length_to_si(double x) const { return x * length_; }
  [[nodiscard]] double length_from_si(double x) const { return x / length_; }
  [[nodiscard]] double wavenumber_to_si(double k) const { return k / length_; }
  [[nodiscard]] double wavenumber_from_si(double k) const { return k * length_; }
  [[nodiscard]] double momentum_to_si(double p) const { return p * momentum_unit(); }
  [[nodiscard]] double momentum_from_si(double p) const { return p / momentum_unit(); }
  [[nodiscard]] complex width_to_si(complex a) const { return a / (length_ * length_); }
  [[nodiscard]] complex width_from_si(complex a) const { return a * (length_ * length_); }
  [[nodiscard]] double rate_to_si(double r) const { return r / time_; }
  [[nodiscard]] double rate_from_si(double r) const { return r * time_; }
  [[nodiscard]] double energy_to_si(double e) const { return e * energy_unit(); }
  [[nodiscard]] double energy_from_si(double e) const { return e / energy_unit(); }
  [[nodiscard]] double cov_q2_to_si(double c) const { return c * length_ * length_; }
  [[nodiscard]] double cov_q2_from_si(double c) const { return c / (length_ * length_); }
  [[nodiscard]] double cov_qp_to_si(double c) const { return c * hbar_; }
  [[nodiscard]] double cov_qp_from_si(double c) const { return c / hbar_; }
  [[nodiscard]] double cov_p2_to_si(double c) const { return c * momentum_unit() * momentum_unit(); }
  [[nodiscard]] double cov_p2_from_si(double c) const { return c / (momentum_unit() * momentum_unit()); }
  /// gamma is already dimensionless.
  [[nodiscard]] complex gamma_to_si(complex g) const { return g; }
  [[nodiscard]] complex gamma_from_si(complex g) const { return g; }

 private:
  double time_;
  double length_;
  double hbar_;
};

/// Order-of-magnitude figures for a superposition of two packets a
/// distance X0 apart.
struct MicroMacroEstimates {
  double expected_suppression_time = 0;  // b / (lambda X0^2), s
  double sigma_q_inf = 0;                // m
  double fluctuation_rate = 0;           // d/dt Var<q> floor for a stationary packet, m^2/s
};

MicroMacroEstimates macro_micro_estimates(const ModelParams& p, double separation,
                                          double b = constants::suppression_threshold);

/// Spread of the mean position and momentum of a stationary packet after a
/// time t (SI). Valid only once the width has reached its asymptotic value.
struct FluctuationDamping {
  double var_q = 0;  // m^2
  double var_p = 0;  // (kg m/s)^2
  double prefactor = 0;  // omega / (8 lambda), m^2
  static constexpr std::string_view assumption = "stationary spread (a = a_inf) for all t >= 0";
};

FluctuationDamping fluctuation_damping(const DerivedConstants& c, double t);

}  // namespace qmupl
