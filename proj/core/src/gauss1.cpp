#include "qmupl/gauss1.hpp"

#include <cmath>
#include <numbers>

#include "qmupl/errors.hpp"

namespace qmupl {

namespace {

void require_width(complex a) {
  if (!(a.real() > 0.0) || !std::isfinite(a.real()) || !std::isfinite(a.imag())) {
    throw PreconditionError("width parameter needs a positive finite real part");
  }
}

constexpr double kPhaseFloor = 1e-12;

}  // namespace

void GaussianState::validate() const {
  require_width(a);
  if (!std::isfinite(x_bar) || !std::isfinite(k_bar)) throw PreconditionError("non-finite peak parameters");
}

double GaussianState::log_norm_squared() const {
  return 2.0 * gamma.real() + 0.5 * std::log(std::numbers::pi / (2.0 * a.real()));
}

double GaussianState::norm_squared() const { return std::exp(log_norm_squared()); }

RiccatiClosedForm::RiccatiClosedForm(const Model& model, complex a0) {
  require_width(a0);
  if (!(model.lambda > 0.0)) throw ParameterError("closed form needs lambda > 0");
  const double kappa = std::sqrt(model.mass * model.lambda / model.hbar);
  c = complex(0.5 * kappa, -0.5 * kappa);
  const double beta = std::sqrt(model.hbar * model.lambda / model.mass);
  b = complex(beta, beta);
  k = std::atanh(a0 / c);
  phi1 = 2.0 * k.real();
  phi2 = 2.0 * k.imag();
  omega = model.omega();
  lambda_over_omega = model.lambda / omega;
}

complex RiccatiClosedForm::a_tanh(double t) const { return c * std::tanh(b * t + k); }

complex RiccatiClosedForm::a_phases(double t) const {
  const double u = omega * t + phi1;
  const double v = omega * t + phi2;
  const double den = std::cosh(u) + std::cos(v);
  if (den <= kPhaseFloor) return a_tanh(t);
  return {lambda_over_omega * (std::sinh(u) + std::sin(v)) / den,
          -lambda_over_omega * (std::sinh(u) - std::sin(v)) / den};
}

RiccatiClosedForm::PhaseSpreads RiccatiClosedForm::spreads(double t, const Model& model) const {
  const double u = omega * t + phi1;
  const double v = omega * t + phi2;
  const double num = std::sinh(u) + std::sin(v);
  const double den = std::cosh(u) + std::cos(v);
  if (den <= kPhaseFloor || num <= 0.0) {
    const Spreads s = spreads_of(a_tanh(t), model);
    return {s.sigma_q, s.sigma_p, true};
  }
  const double sq = std::sqrt(model.hbar / (model.mass * omega)) * std::sqrt(den / num);
  const double sp =
      std::sqrt(model.hbar * model.mass * omega / 2.0) * std::sqrt((std::cosh(u) - std::cos(v)) / num);
  return {sq, sp, false};
}

complex riccati_rhs(const Model& model, complex a) {
  return model.lambda - complex(0.0, 2.0 * model.hbar_over_m()) * a * a;
}

complex a_exact(double t, complex a0, const Model& model) {
  require_width(a0);
  if (!(t >= 0.0)) throw PreconditionError("a_exact needs t >= 0");
  if (t == 0.0) return a0;
  if (model.lambda == 0.0) {
    return a0 / (1.0 + complex(0.0, 2.0 * model.hbar_over_m() * t) * a0);
  }
  const double kappa = std::sqrt(model.mass * model.lambda / model.hbar);
  const complex c(0.5 * kappa, -0.5 * kappa);
  const double beta = std::sqrt(model.hbar * model.lambda / model.mass) * t;
  // tanh(bt) = (1 - e^{-2bt}) / (1 + e^{-2bt}), stable since Re(bt) > 0.
  const complex e = std::exp(complex(-2.0 * beta, -2.0 * beta));
  const complex tb = (1.0 - e) / (1.0 + e);
  const complex w = a0 / c;
  return c * (tb + w) / (1.0 + w * tb);
}

Spreads spreads_of(complex a, const Model& model) {
  require_width(a);
  return {0.5 / std::sqrt(a.real()), model.hbar * std::sqrt(std::norm(a) / a.real())};
}

Spreads spreads(double t, complex a0, const Model& model) { return spreads_of(a_exact(t, a0, model), model); }

GaussianState step_means(const GaussianState& s, double dW, double dt, const Model& model) {
  return step_means(s, dW, dt, model, a_exact(dt, s.a, model));
}

GaussianState step_means(const GaussianState& s, double dW, double dt, const Model& model, complex a_next) {
  const double sl = std::sqrt(model.lambda);
  GaussianState out = s;
  out.x_bar = s.x_bar + model.hbar_over_m() * s.k_bar * dt + sl / (2.0 * s.a.real()) * dW;
  out.k_bar = s.k_bar - sl * (s.a.imag() / s.a.real()) * dW;
  out.a = a_next;
  out.t = s.t + dt;
  return out;
}

complex gamma_drift(const GaussianState& s, const Model& model) {
  const double ar = s.a.real();
  const double ai = s.a.imag();
  const double hm = model.hbar_over_m();
  const double l = model.lambda;
  return {l * s.x_bar * s.x_bar + hm * ai + l / (4.0 * ar),
          -hm * ar - 0.5 * hm * s.k_bar * s.k_bar + l * ai / (4.0 * ar * ar)};
}

complex gamma_step(const GaussianState& s, double d_xi, double dt, const Model& model) {
  const double sl = std::sqrt(model.lambda);
  const double dz = d_xi - 2.0 * sl * s.x_bar * dt;
  const complex drift = gamma_drift(s, model);
  return {drift.real() * dt + sl * s.x_bar * dz, drift.imag() * dt + sl * (s.a.imag() / s.a.real()) * s.x_bar * dz};
}

GaussianState step_linear(const GaussianState& s, double d_xi, double dt, const Model& model, complex a_next) {
  const double sl = std::sqrt(model.lambda);
  const double dz = d_xi - 2.0 * sl * s.x_bar * dt;
  GaussianState out = s;
  out.gamma = s.gamma + gamma_step(s, d_xi, dt, model);
  out.x_bar = s.x_bar + model.hbar_over_m() * s.k_bar * dt + sl / (2.0 * s.a.real()) * dz;
  out.k_bar = s.k_bar - sl * (s.a.imag() / s.a.real()) * dz;
  out.a = a_next;
  out.t = s.t + dt;
  return out;
}

namespace {

struct Cov3 {
  double q2, qp, p2;
};

Cov3 cov_rhs(const Cov3& c, complex a, const Model& model) {
  const double ar = a.real();
  const double ai = a.imag();
  const double l = model.lambda;
  const double hb = model.hbar;
  return {2.0 * c.qp / model.mass + l / (4.0 * ar * ar), c.p2 / model.mass - 0.5 * l * hb * ai / (ar * ar),
          l * hb * hb * (ai / ar) * (ai / ar)};
}

Cov3 axpy(const Cov3& x, double h, const Cov3& d) { return {x.q2 + h * d.q2, x.qp + h * d.qp, x.p2 + h * d.p2}; }

// Advances the covariances over [t0, t1] in n RK4 steps; `a_t` at the
// left end is `a_left`, and later widths come from the semigroup property.
Cov3 rk4(Cov3 y, complex a_left, double t0, double t1, std::size_t n, const Model& model) {
  const double h = (t1 - t0) / static_cast<double>(n);
  complex a0 = a_left;
  for (std::size_t i = 0; i < n; ++i) {
    const complex am = a_exact(0.5 * h, a0, model);
    const complex a1 = a_exact(h, a0, model);
    const Cov3 k1 = cov_rhs(y, a0, model);
    const Cov3 k2 = cov_rhs(axpy(y, 0.5 * h, k1), am, model);
    const Cov3 k3 = cov_rhs(axpy(y, 0.5 * h, k2), am, model);
    const Cov3 k4 = cov_rhs(axpy(y, h, k3), a1, model);
    y = {y.q2 + h / 6.0 * (k1.q2 + 2.0 * k2.q2 + 2.0 * k3.q2 + k4.q2),
         y.qp + h / 6.0 * (k1.qp + 2.0 * k2.qp + 2.0 * k3.qp + k4.qp),
         y.p2 + h / 6.0 * (k1.p2 + 2.0 * k2.p2 + 2.0 * k3.p2 + k4.p2)};
    a0 = a1;
  }
  return y;
}

}  // namespace

CovarianceState covariance_evolution(double t, complex a0, const Model& model, std::size_t min_steps) {
  require_width(a0);
  if (!(t >= 0.0)) throw PreconditionError("covariance evolution needs t >= 0");
  if (t == 0.0) return {};
  const Cov3 y = rk4({0.0, 0.0, 0.0}, a0, 0.0, t, std::max<std::size_t>(min_steps, 1), model);
  return {y.q2, y.qp, y.p2, t};
}

std::vector<CovarianceState> covariance_series(std::span<const double> times, complex a0, const Model& model,
                                               std::size_t steps_per_interval) {
  require_width(a0);
  std::vector<CovarianceState> out;
  out.reserve(times.size());
  Cov3 y{0.0, 0.0, 0.0};
  double t_prev = 0.0;
  complex a_prev = a0;
  for (double t : times) {
    if (!(t >= t_prev)) throw PreconditionError("covariance times must be sorted and non-negative");
    if (t > t_prev) {
      y = rk4(y, a_prev, t_prev, t, std::max<std::size_t>(steps_per_interval, 1), model);
      a_prev = a_exact(t - t_prev, a_prev, model);
      t_prev = t;
    }
    out.push_back({y.q2, y.qp, y.p2, t});
  }
  return out;
}

CovarianceState stationary_covariance(double t, const Model& model) {
  const double w = model.omega();
  const double wt = w * t;
  const double pref = w / (8.0 * model.lambda);
  // Integrals of the covariance equations with aR = -aI = lambda/omega.
  CovarianceState s;
  s.t = t;
  s.c_p2 = model.lambda * model.hbar * model.hbar * t;
  s.c_qp = model.hbar * (wt * wt / 8.0 + wt / 2.0);
  s.c_q2 = pref * (wt * wt * wt / 6.0 + wt * wt + 2.0 * wt);
  return s;
}

double packet_energy(const GaussianState& s, const Model& model) {
  const double p = model.hbar * s.k_bar;
  const double sp = model.hbar * std::sqrt(std::norm(s.a) / s.a.real());
  return (p * p + sp * sp) / (2.0 * model.mass);
}

EnergyLaw energy_law(const Model& model, std::span<const double> times, std::span<const double> mean_energy,
                     std::size_t n_paths) {
  if (times.size() != mean_energy.size() || times.size() < 2) {
    throw ParameterError("energy law needs at least two aligned samples");
  }
  EnergyLaw out;
  out.rate_analytic = model.lambda * model.hbar * model.hbar / (2.0 * model.mass);
  double mt = 0.0;
  double me = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    mt += times[i];
    me += mean_energy[i];
  }
  mt /= static_cast<double>(times.size());
  me /= static_cast<double>(times.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    sxy += (times[i] - mt) * (mean_energy[i] - me);
    sxx += (times[i] - mt) * (times[i] - mt);
  }
  if (!(sxx > 0.0)) throw ParameterError("energy law needs distinct sample times");
  out.rate_mc = sxy / sxx;
  if (n_paths < 100) {
    out.small_ensemble = true;
    out.warning = "ensemble of " + std::to_string(n_paths) + " paths is below 100; slope is unreliable";
  }
  return out;
}

}  // namespace qmupl
