#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "checks.hpp"
#include "qmupl/gauss1.hpp"
#include "qmupl/gauss2.hpp"
#include "qmupl/master.hpp"
#include "qmupl/stochastic.hpp"
#include "qmupl/units.hpp"

namespace qmupl::verify {

namespace {

complex random_width(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double re = std::exp(std::log(1e-2) + u(rng) * std::log(1e3));
  return {re, -5.0 + 10.0 * u(rng)};
}

}  // namespace

CriterionResult closed_form_identities(const Options&) {
  Check c;
  const Model dimless;
  const Model nucleon = Model::si(derive_constants(preset("nucleon")));
  for (const Model* m : {&dimless, &nucleon}) {
    const Spreads s = spreads_of(m->a_inf(), *m);
    const double rel = std::abs(s.sigma_q * s.sigma_p / (m->hbar / std::sqrt(2.0)) - 1.0);
    c.require(rel < 1e-12, fmt::format("sigma_q sigma_p = hbar/sqrt2 rel {:.1e}", rel));
  }
  const double residual = std::abs(riccati_rhs(dimless, dimless.a_inf()));
  c.require(residual < 1e-12, fmt::format("a_inf residual {:.1e}", residual));
  const AInfinitySystem sys = a_infinity_system(dimless);
  const double w = dimless.omega();
  double worst = 0.0;
  for (const complex& e : sys.eigenvalues) {
    const complex expect(-0.5 * w, (e.imag() >= 0 ? 0.5 : -0.5) * w);
    worst = std::max(worst, std::abs(e - expect) / std::abs(expect));
  }
  c.require(sys.eigenvalues[0].imag() * sys.eigenvalues[1].imag() < 0.0 && worst < 1e-12,
            fmt::format("A(inf) eigenvalues rel {:.1e}", worst));
  return finish(1, "closed-form identities", c);
}

CriterionResult riccati_oracle(const Options& o) {
  Check c;
  const Model m;
  std::mt19937_64 rng(o.seed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const complex a0 = random_width(rng);
    auto rhs = [&](complex a) { return riccati_rhs(m, a); };
    complex ref = a0;
    for (int k = 1; k <= 20; ++k) {
      const double t = 0.5 * k;  // omega t in (0, 10]
      ref = rk4_reference(rhs, ref, 0.5);
      worst = std::max(worst, std::abs(a_exact(t, a0, m) - ref) / std::abs(ref));
    }
  }
  c.require(worst < 1e-8, fmt::format("max rel error {:.2e} over 100 widths", worst));
  return finish(2, "width equation vs RK4", c);
}

CriterionResult positivity_sweep(const Options& o) {
  Check c;
  const Model m;
  std::mt19937_64 rng(o.seed + 1);
  std::size_t bad = 0;
  double min_re = INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const complex a0 = random_width(rng);
    for (int k = 0; k <= 200; ++k) {
      const double re = a_exact(0.25 * k, a0, m).real();
      min_re = std::min(min_re, re);
      bad += !(re > 0.0);
    }
  }
  c.require(bad == 0, fmt::format("{} non-positive of 201000, min Re a {:.3e}", bad, min_re));
  return finish(3, "width positivity", c);
}

CriterionResult situation_a(const Options&) {
  Check c;
  const Model m;
  const double X0 = 2.0;
  const complex a0 = m.a_inf();
  std::vector<double> times;
  for (int k = 1; k <= 100; ++k) times.push_back(0.1 * k);
  const std::vector<XKState> traj = xk_trajectory(X0, 0.0, a0, m, times);
  double worst = 0.0;
  for (const XKState& s : traj) {
    // Relative to the decay envelope; X itself has zeros.
    const double envelope = X0 * std::exp(-0.5 * m.omega() * s.t);
    worst = std::max(worst, std::abs(s.X - situation_a_separation(X0, s.t, m)) / envelope);
  }
  c.require(worst < 1e-8, fmt::format("X_t rel error {:.2e}", worst));

  const double expect = m.lambda * X0 * X0 / (2.0 * m.omega());
  const double horizon = 60.0 / m.omega();
  const TimeChange tc = time_change([&](double t) { return situation_a_separation(X0, t, m); }, m.lambda, horizon,
                                    1e-9);
  const double rel_closed = std::abs(tc.s_infinity / expect - 1.0);
  c.require(rel_closed < 1e-6, fmt::format("s_inf {:.9f} vs {:.9f}", tc.s_infinity, expect));

  // Second route: integrate the numerically evolved separation.
  const double dt = 1e-3;
  std::vector<double> grid;
  for (double t = 0.0; t <= horizon + 0.5 * dt; t += dt) grid.push_back(t);
  const std::vector<XKState> dense = xk_trajectory(X0, 0.0, a0, m, grid, 4);
  std::vector<double> xs;
  for (const XKState& s : dense) xs.push_back(s.X);
  const double s_num = time_change(xs, dt, m.lambda).s_infinity;
  const double rel_num = std::abs(s_num / expect - 1.0);
  c.require(rel_num < 1e-6, fmt::format("s_inf from evolved X rel {:.1e}", rel_num));
  return finish(4, "situation A separation", c);
}

CriterionResult physical_magnitudes(const Options&) {
  Check c;
  auto within = [](double v, double centre, double factor) { return v >= centre / factor && v <= centre * factor; };
  const DerivedConstants nucleon = derive_constants(preset("nucleon"));
  const DerivedConstants electron = derive_constants(preset("electron"));
  const DerivedConstants gram = derive_constants(preset("gram"));
  c.require(nucleon.omega >= 1e-5 && nucleon.omega < 1e-4, fmt::format("omega {:.3e} 1/s", nucleon.omega));
  c.require(nucleon.sigma_q_inf >= 3e-3 && nucleon.sigma_q_inf <= 0.3,
            fmt::format("sigma_q nucleon {:.3e} m", nucleon.sigma_q_inf));
  c.require(electron.sigma_q_inf >= 0.3 && electron.sigma_q_inf <= 3.0,
            fmt::format("sigma_q electron {:.3e} m", electron.sigma_q_inf));
  c.require(within(gram.sigma_q_inf, 1e-13, 3.0), fmt::format("sigma_q 1 g {:.3e} m", gram.sigma_q_inf));
  ModelParams kg;
  kg.mass = 1.0;
  const double a = alpha(Model::si(derive_constants(kg)), 1.0);
  c.require(within(a, 1e43, 10.0), fmt::format("alpha(1 kg, 1 s) {:.3e} 1/m^2", a));
  const double tb = macro_micro_estimates(preset("electron"), 1.0).expected_suppression_time;
  c.require(within(tb, 1e6, 5.0), fmt::format("E[T_b] electron {:.3e} s", tb));
  c.require(within(nucleon.energy_rate, 1e-43, 10.0), fmt::format("energy rate {:.3e} J/s", nucleon.energy_rate));
  return finish(12, "physical magnitudes", c);
}

}  // namespace qmupl::verify
