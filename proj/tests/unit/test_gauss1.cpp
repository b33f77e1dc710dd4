#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qmupl/errors.hpp"
#include "qmupl/gauss1.hpp"
#include "qmupl/stochastic.hpp"

using namespace qmupl;

namespace {

const Model kModel;  // hbar = m = omega = 1, lambda = 1/4

double rel(complex a, complex b) { return std::abs(a - b) / std::abs(b); }

oracle::cplx riccati_oracle(oracle::cplx a0, double t, const Model& m) {
  return oracle::integrate([&](oracle::cplx a) { return m.lambda - oracle::cplx(0.0, 2.0 * m.hbar / m.mass) * a * a; },
                           a0, t);
}

}  // namespace

TEST(Gauss1, ExactWidthRejectsNonPositiveRealPart) {
  EXPECT_THROW(a_exact(1.0, complex(0.0, 1.0), kModel), PreconditionError);
  EXPECT_THROW(a_exact(1.0, complex(-1.0, 0.0), kModel), PreconditionError);
  EXPECT_THROW(a_exact(-1.0, complex(1.0, 0.0), kModel), PreconditionError);
}

TEST(Gauss1, StationaryWidthIsAFixedPoint) {
  const complex ainf = kModel.a_inf();
  EXPECT_LT(std::abs(riccati_rhs(kModel, ainf)), 1e-15);
  for (double t : {1e-6, 0.1, 1.0, 3.7, 20.0, 100.0}) EXPECT_LT(rel(a_exact(t, ainf, kModel), ainf), 1e-12);
}

TEST(Gauss1, LargeTimesReachStationaryWidth) {
  oracle::Gen gen(9);
  for (int i = 0; i < 100; ++i) {
    const complex a0 = gen.width();
    EXPECT_LT(rel(a_exact(40.0, a0, kModel), kModel.a_inf()), 1e-12) << a0;
  }
}

TEST(Gauss1, MatchesRungeKuttaOracle) {
  oracle::Gen gen(21);
  for (int i = 0; i < 30; ++i) {
    const complex a0 = gen.width();
    const oracle::cplx ref = riccati_oracle(a0, 3.0, kModel);
    EXPECT_LT(rel(a_exact(3.0, a0, kModel), ref), 1e-8) << a0;
  }
}

TEST(Gauss1, SchrodingerLimitWidth) {
  const Model free = kModel.schrodinger();
  const complex a0(0.7, 0.2);
  EXPECT_LT(rel(a_exact(2.0, a0, free), riccati_oracle(a0, 2.0, free)), 1e-10);
}

TEST(Gauss1, RealPartStaysPositive) {
  oracle::Gen gen(1);
  for (int i = 0; i < 1000; ++i) {
    const complex a0 = gen.width();
    for (double t = 0.0; t <= 50.0; t += 0.5) ASSERT_GT(a_exact(t, a0, kModel).real(), 0.0) << a0 << " t=" << t;
  }
}

TEST(Gauss1, PhaseFormAgreesWithTanhForm) {
  oracle::Gen gen(4);
  for (int i = 0; i < 200; ++i) {
    const complex a0(gen.log_uniform(0.05, 5.0), gen.uniform(-2.0, 2.0));
    const RiccatiClosedForm cf(kModel, a0);
    EXPECT_NEAR(cf.phi1, 2.0 * cf.k.real(), 1e-15);
    for (double t : {0.0, 0.3, 1.0, 4.0, 10.0}) {
      const complex tanh_form = a_exact(t, a0, kModel);
      EXPECT_LT(rel(cf.a_phases(t), tanh_form), 1e-10) << a0 << " t=" << t;
      EXPECT_LT(rel(cf.a_tanh(t), tanh_form), 1e-10) << a0 << " t=" << t;
    }
  }
}

TEST(Gauss1, PhaseFormIsFiniteNearDenominatorZero) {
  // A very narrow packet puts cosh(phi1) + cos(phi2) within rounding of zero.
  const complex a0(1e8, 0.0);
  const RiccatiClosedForm cf(kModel, a0);
  EXPECT_LT(std::cosh(cf.phi1) + std::cos(cf.phi2), 1e-12);
  const complex a = cf.a_phases(0.0);
  EXPECT_TRUE(std::isfinite(a.real()) && std::isfinite(a.imag()));
  EXPECT_LT(rel(a, a0), 1e-6);
  const RiccatiClosedForm::PhaseSpreads s = cf.spreads(0.0, kModel);
  EXPECT_TRUE(s.fallback);
  EXPECT_TRUE(std::isfinite(s.sigma_q));
}

TEST(Gauss1, SpreadsAgreeBetweenForms) {
  oracle::Gen gen(8);
  for (int i = 0; i < 100; ++i) {
    const complex a0(gen.log_uniform(0.05, 5.0), gen.uniform(-2.0, 2.0));
    const RiccatiClosedForm cf(kModel, a0);
    for (double t : {0.2, 1.0, 5.0}) {
      const Spreads direct = spreads(t, a0, kModel);
      const RiccatiClosedForm::PhaseSpreads ph = cf.spreads(t, kModel);
      EXPECT_NEAR(ph.sigma_q / direct.sigma_q, 1.0, 1e-12);
      EXPECT_NEAR(ph.sigma_p / direct.sigma_p, 1.0, 1e-10);
      EXPECT_NEAR(direct.sigma_q, 0.5 / std::sqrt(a_exact(t, a0, kModel).real()), 1e-15);
    }
  }
}

TEST(Gauss1, UncertaintyProductBoundAndLimit) {
  oracle::Gen gen(12);
  for (int i = 0; i < 200; ++i) {
    const complex a0 = gen.width();
    for (double t = 0.0; t <= 30.0; t += 1.5) {
      const Spreads s = spreads(t, a0, kModel);
      EXPECT_GE(s.sigma_q * s.sigma_p, 0.5 * kModel.hbar * (1.0 - 1e-12));
    }
    const Spreads late = spreads(60.0, a0, kModel);
    EXPECT_NEAR(late.sigma_q, std::sqrt(kModel.hbar / (kModel.mass * kModel.omega())), 1e-12);
    EXPECT_NEAR(late.sigma_q * late.sigma_p, kModel.hbar / std::sqrt(2.0), 1e-12);
  }
}

TEST(Gauss1, SpreadsDoNotDependOnNoise) {
  GaussianState a;
  a.a = complex(2.0, 0.3);
  GaussianState b = a;
  const WienerPath p1 = sample_path(1.0, 1e-2, 1, 0);
  const WienerPath p2 = sample_path(1.0, 1e-2, 1, 1);
  for (std::size_t i = 0; i < p1.steps(); ++i) {
    a = step_means(a, p1.increments[i], p1.dt, kModel);
    b = step_means(b, p2.increments[i], p2.dt, kModel);
  }
  EXPECT_EQ(a.a, b.a);
  EXPECT_NE(a.x_bar, b.x_bar);
}

TEST(Gauss1, FreeParticleMeansMoveBallistically) {
  const Model free = kModel.schrodinger();
  GaussianState s;
  s.a = complex(0.5, 0.0);
  s.x_bar = 1.0;
  s.k_bar = 0.75;
  const WienerPath p = sample_path(2.0, 1e-3, 3, 0);
  for (double dW : p.increments) s = step_means(s, dW, p.dt, free);
  EXPECT_NEAR(s.x_bar, 1.0 + 0.75 * 2.0, 1e-12);
  EXPECT_EQ(s.k_bar, 0.75);
}

TEST(Gauss1, EnsembleMeansObeyClassicalLaws) {
  const int n = 10000;
  const double T = 1.0;
  const double dt = 1e-2;
  double sp = 0.0, sp2 = 0.0, sq = 0.0, sq2 = 0.0;
  for (int i = 0; i < n; ++i) {
    GaussianState s;
    s.a = complex(1.0, 0.5);
    s.k_bar = 0.8;
    const WienerPath p = sample_path(T, dt, 77, i);
    for (double dW : p.increments) s = step_means(s, dW, dt, kModel);
    sp += s.k_bar;
    sp2 += s.k_bar * s.k_bar;
    sq += s.x_bar;
    sq2 += s.x_bar * s.x_bar;
  }
  const double mp = sp / n;
  const double sep = std::sqrt((sp2 / n - mp * mp) / n);
  EXPECT_LT(std::abs(mp - 0.8), 3.0 * sep);
  // E[x_T] = x_0 + (hbar/m) E[k] T with E[k] constant.
  const double mq = sq / n;
  const double seq = std::sqrt((sq2 / n - mq * mq) / n);
  EXPECT_LT(std::abs(mq - 0.8 * T), 3.0 * seq);
}

TEST(Gauss1, CovarianceStartsAtZero) {
  const CovarianceState c = covariance_evolution(0.0, complex(1.0, 0.0), kModel);
  EXPECT_EQ(c.c_q2, 0.0);
  EXPECT_EQ(c.c_qp, 0.0);
  EXPECT_EQ(c.c_p2, 0.0);
}

TEST(Gauss1, StationaryCovarianceClosedForms) {
  for (double t : {0.5, 1.0, 3.0, 8.0}) {
    const CovarianceState rk = covariance_evolution(t, kModel.a_inf(), kModel);
    const CovarianceState cf = stationary_covariance(t, kModel);
    EXPECT_NEAR(rk.c_p2, kModel.lambda * t, 1e-12 * t);
    EXPECT_NEAR(rk.c_q2 / cf.c_q2, 1.0, 1e-8);
    EXPECT_NEAR(rk.c_qp / cf.c_qp, 1.0, 1e-8);
    // Dimensionless cubic: t^3/12 + t^2/2 + t.
    EXPECT_NEAR(cf.c_q2, t * t * t / 12.0 + t * t / 2.0 + t, 1e-12 * cf.c_q2);
  }
}

TEST(Gauss1, CovarianceCauchySchwarz) {
  oracle::Gen gen(30);
  for (int i = 0; i < 40; ++i) {
    const complex a0(gen.log_uniform(0.05, 5.0), gen.uniform(-2.0, 2.0));
    const std::vector<double> times{0.1, 0.5, 1.0, 2.0, 5.0};
    for (const CovarianceState& c : covariance_series(times, a0, kModel)) {
      EXPECT_GE(c.c_q2, 0.0);
      EXPECT_GE(c.c_p2, 0.0);
      EXPECT_LE(c.c_qp * c.c_qp, c.c_q2 * c.c_p2 * (1.0 + 1e-12));
    }
  }
}

TEST(Gauss1, EnergyRateAnalytic) {
  const Model nucleon = Model::si(derive_constants(preset("nucleon")));
  const double r = energy_law(nucleon, std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0}, 1000).rate_analytic;
  EXPECT_NEAR(r / 3.3244862495799727e-44, 1.0, 1e-12);
  const Model e = Model::si(derive_constants(preset("electron")));
  const Model g = Model::si(derive_constants(preset("gram")));
  const auto rate = [](const Model& m) { return m.lambda * m.hbar * m.hbar / (2.0 * m.mass); };
  EXPECT_NEAR(rate(e) / rate(g), 1.0, 1e-12);
}

TEST(Gauss1, EnergyRateFromEnsemble) {
  const int n = 10000;
  const double dt = 1e-2;
  const std::size_t steps = 200;
  std::vector<double> times(steps + 1), energy(steps + 1, 0.0);
  for (std::size_t k = 0; k <= steps; ++k) times[k] = k * dt;
  for (int i = 0; i < n; ++i) {
    GaussianState s;
    s.a = kModel.a_inf();
    const WienerPath p = sample_path(steps * dt, dt, 5, i);
    energy[0] += packet_energy(s, kModel) / n;
    for (std::size_t k = 0; k < steps; ++k) {
      s = step_means(s, p.increments[k], dt, kModel);
      energy[k + 1] += packet_energy(s, kModel) / n;
    }
  }
  const EnergyLaw law = energy_law(kModel, times, energy, n);
  EXPECT_DOUBLE_EQ(law.rate_analytic, 0.125);
  EXPECT_FALSE(law.small_ensemble);
  EXPECT_LT(std::abs(law.rate_mc - law.rate_analytic) / law.rate_analytic, 0.05);
}

TEST(Gauss1, SmallEnsembleWarns) {
  const EnergyLaw law = energy_law(kModel, std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 0.1}, 99);
  EXPECT_TRUE(law.small_ensemble);
  EXPECT_FALSE(law.warning.empty());
}

TEST(Gauss1, GammaCorrectionCancelsForEqualWidths) {
  GaussianState a;
  a.a = complex(0.8, -0.3);
  a.x_bar = -1.0;
  a.k_bar = 0.2;
  GaussianState b = a;
  b.x_bar = 2.0;
  b.k_bar = -0.4;
  const complex diff = gamma_drift(b, kModel) - gamma_drift(a, kModel);
  const double hm = kModel.hbar_over_m();
  EXPECT_NEAR(diff.real(), kModel.lambda * (4.0 - 1.0), 1e-15);
  EXPECT_NEAR(diff.imag(), -0.5 * hm * (0.16 - 0.04), 1e-15);
}

TEST(Gauss1, GammaDriftInSchrodingerLimit) {
  GaussianState s;
  s.a = complex(0.6, 0.25);
  s.x_bar = 3.0;
  const Model free = kModel.schrodinger();
  const complex dg = gamma_step(s, 0.7, 1e-3, free);
  EXPECT_NEAR(dg.real(), free.hbar_over_m() * 0.25 * 1e-3, 1e-18);
}

TEST(Gauss1, LinearEquationNormIsAMartingale) {
  const int n = 10000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    GaussianState g;
    g.a = complex(0.5, 0.2);
    g.x_bar = 0.5;
    g.gamma = complex(-0.5 * g.log_norm_squared(), 0.0);
    const WienerPath xi = sample_path(1.0, 1e-3, 13, i);
    for (double d : xi.increments) g = step_linear(g, d, xi.dt, kModel, a_exact(xi.dt, g.a, kModel));
    const double v = g.norm_squared();
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  EXPECT_LT(std::abs(mean - 1.0), 3.0 * se) << "mean " << mean << " se " << se;
}
