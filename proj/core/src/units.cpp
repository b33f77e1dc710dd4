#include "qmupl/units.hpp"

#include <cmath>
#include <string>

#include "qmupl/errors.hpp"

namespace qmupl {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void ModelParams::validate() const {
  if (!positive_finite(mass)) throw ParameterError("mass must be positive, got " + std::to_string(mass));
  if (!positive_finite(reference_mass)) throw ParameterError("reference mass must be positive");
  if (!positive_finite(lambda0)) throw ParameterError("lambda0 must be positive");
  if (!positive_finite(hbar)) throw ParameterError("hbar must be positive");
}

ModelParams preset(std::string_view name) {
  ModelParams p;
  if (name == "electron") {
    p.mass = constants::electron_mass;
  } else if (name == "nucleon") {
    p.mass = constants::nucleon_mass;
  } else if (name == "gram") {
    p.mass = constants::gram;
  } else if (name == "earth") {
    p.mass = constants::earth_mass;
  } else {
    throw ParameterError("unknown particle preset '" + std::string(name) + "'");
  }
  return p;
}

ModelParams nucleons(double count) {
  if (!positive_finite(count)) throw ParameterError("nucleon count must be positive");
  ModelParams p;
  p.mass = count * constants::nucleon_mass;
  return p;
}

std::vector<std::string> preset_names() { return {"electron", "nucleon", "gram", "earth"}; }

double DerivedConstants::lambda_cm(double total_mass) const {
  if (!positive_finite(total_mass)) throw ParameterError("total mass must be positive");
  return total_mass / params.reference_mass * params.lambda0;
}

DerivedConstants derive_constants(const ModelParams& p) {
  p.validate();
  DerivedConstants c;
  c.params = p;
  c.lambda = p.mass / p.reference_mass * p.lambda0;
  c.omega = 2.0 * std::sqrt(p.hbar * p.lambda0 / p.reference_mass);
  c.time_unit = 1.0 / c.omega;
  c.length_unit = std::sqrt(p.hbar / (p.mass * c.omega));
  c.sigma_q_inf = c.length_unit;
  c.sigma_p_inf = std::sqrt(p.hbar * p.mass * c.omega / 2.0);
  c.a_inf = complex(c.lambda / c.omega, -c.lambda / c.omega);
  c.energy_rate = p.lambda0 * p.hbar * p.hbar / (2.0 * p.reference_mass);
  return c;
}

double Model::omega() const { return 2.0 * std::sqrt(lambda * hbar / mass); }

complex Model::a_inf() const {
  if (!(lambda > 0.0)) throw DomainError("a_inf is undefined without collapse (lambda = 0)");
  const double w = lambda / omega();
  return {w, -w};
}

double Model::sigma_q_inf() const { return std::sqrt(hbar / (mass * omega())); }

double Model::sigma_p_inf() const { return std::sqrt(hbar * mass * omega() / 2.0); }

Model Model::si(const DerivedConstants& c) { return {c.params.hbar, c.params.mass, c.lambda}; }

Model Model::dimensionless(const DerivedConstants& c) {
  // hbar -> 1, m -> 1, lambda -> lambda l^2 / omega (= 1/4 up to rounding).
  return {1.0, 1.0, c.lambda * c.length_unit * c.length_unit / c.omega};
}

Scale::Scale(const DerivedConstants& c)
    : time_(c.time_unit), length_(c.length_unit), hbar_(c.params.hbar) {}

MicroMacroEstimates macro_micro_estimates(const ModelParams& p, double separation, double b) {
  if (!(separation > 0.0) || !std::isfinite(separation)) {
    throw DomainError("separation must be positive: a superposition needs two distinct packets");
  }
  if (!(b > 0.0)) throw ParameterError("suppression threshold b must be positive");
  const auto c = derive_constants(p);
  MicroMacroEstimates e;
  e.expected_suppression_time = b / (c.lambda * separation * separation);
  e.sigma_q_inf = c.sigma_q_inf;
  // lambda / (4 (a_inf^R)^2) = omega^2 / (4 lambda) = hbar / m
  e.fluctuation_rate = c.omega * c.omega / (4.0 * c.lambda);
  return e;
}

FluctuationDamping fluctuation_damping(const DerivedConstants& c, double t) {
  if (!(t >= 0.0)) throw ParameterError("time must be non-negative");
  FluctuationDamping f;
  const double wt = c.omega * t;
  f.prefactor = c.omega / (8.0 * c.lambda);
  // Closed-form integral of the covariance equations with a = a_inf.
  f.var_q = f.prefactor * (wt * wt * wt / 6.0 + wt * wt + 2.0 * wt);
  f.var_p = c.lambda * c.params.hbar * c.params.hbar * t;
  return f;
}

}  // namespace qmupl
