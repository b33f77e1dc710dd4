#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmupl/errors.hpp"
#include "qmupl/gauss2.hpp"

using namespace qmupl;

namespace {

const Model kModel;

oracle::cplx packet(double x, complex a, double xb, double kb, complex g) {
  const double d = x - xb;
  return std::exp(-a * d * d + oracle::cplx(0.0, kb * x) + g);
}

// Quadrature of the superposition, independent of the closed forms.
struct Quad {
  double norm2 = 0;
  double mean = 0;
};

Quad quadrature(const DoubleGaussianState& s) {
  const double w = 12.0 / std::sqrt(s.a.real());
  const double lo = std::min(s.x_bar_1, s.x_bar_2) - w;
  const double hi = std::max(s.x_bar_1, s.x_bar_2) + w;
  auto dens = [&](double x) {
    return std::norm(packet(x, s.a, s.x_bar_1, s.k_bar_1, s.gamma_1) + packet(x, s.a, s.x_bar_2, s.k_bar_2, s.gamma_2));
  };
  Quad q;
  q.norm2 = oracle::simpson(dens, lo, hi, 40000);
  q.mean = oracle::simpson([&](double x) { return x * dens(x); }, lo, hi, 40000) / q.norm2;
  return q;
}

DoubleGaussianState random_state(oracle::Gen& gen) {
  DoubleGaussianState s;
  s.a = complex(gen.log_uniform(0.2, 3.0), gen.uniform(-1.0, 1.0));
  s.x_bar_1 = gen.uniform(-3.0, 1.0);
  s.x_bar_2 = gen.uniform(-1.0, 3.0);
  s.k_bar_1 = gen.uniform(-2.0, 2.0);
  s.k_bar_2 = gen.uniform(-2.0, 2.0);
  s.gamma_1 = complex(gen.uniform(-1.0, 1.0), gen.uniform(-3.0, 3.0));
  s.gamma_2 = complex(gen.uniform(-1.0, 1.0), gen.uniform(-3.0, 3.0));
  return s;
}

}  // namespace

TEST(Gauss2, MeanAndNormMatchQuadrature) {
  oracle::Gen gen(2);
  for (int i = 0; i < 60; ++i) {
    const DoubleGaussianState s = random_state(gen);
    const Quad q = quadrature(s);
    EXPECT_NEAR(log_norm_squared_double(s), std::log(q.norm2), 1e-9);
    EXPECT_NEAR(quantum_mean_double(s), q.mean, 1e-8 * (1.0 + std::abs(q.mean)));
  }
}

TEST(Gauss2, SymmetricStateIsCentred) {
  const DoubleGaussianState s = DoubleGaussianState::symmetric(kModel.a_inf(), 4.0);
  EXPECT_NEAR(quantum_mean_double(s), 0.0, 1e-15);
  EXPECT_EQ(s.X(), 4.0);
  EXPECT_EQ(s.Gamma(), complex(0.0, 0.0));
}

TEST(Gauss2, MeanFollowsDominantPacket) {
  const DoubleGaussianState s = DoubleGaussianState::symmetric(complex(1.0, 0.0), 20.0, 0.0, 30.0);
  EXPECT_NEAR(quantum_mean_double(s), 10.0, 1e-12);
}

TEST(Gauss2, InvalidWidthRejected) {
  DoubleGaussianState s;
  s.a = complex(-1.0, 0.0);
  EXPECT_THROW(s.validate(), PreconditionError);
}

TEST(Gauss2, CorrectionBoundedByOverlap) {
  oracle::Gen gen(5);
  for (int i = 0; i < 2000; ++i) {
    const DoubleGaussianState s = random_state(gen);
    const CollapseVariables v = collapse_variables(s);
    const double g = g_term(v, kModel);
    ASSERT_TRUE(std::isfinite(g));
    EXPECT_LE(std::abs(g), g_bound_overlap(v, s.a.real(), kModel) * (1.0 + 1e-12));
  }
}

TEST(Gauss2, CorrectionVanishesForDistantPackets) {
  const DoubleGaussianState s = DoubleGaussianState::symmetric(complex(1.0, 0.0), 1e6, 0.3, 0.2);
  const CollapseVariables v = collapse_variables(s);
  EXPECT_LT(v.log_h, -1e11);
  EXPECT_EQ(v.h, 0.0);
  EXPECT_EQ(g_term(v, kModel), 0.0);
}

TEST(Gauss2, CBound) {
  EXPECT_NEAR(c_bound(1.0, 2.0), 0.5819767068693264, 1e-15);
  const double lc = log_c_bound(1.0, 1e4);
  EXPECT_TRUE(std::isfinite(lc));
  EXPECT_NEAR(lc, -0.25e8, 1e-6);
  EXPECT_GT(c_bound(1e-6, 1e-3), 1e12);
}

TEST(Gauss2, SituationASeparation) {
  for (double t : {0.5, 1.0, 3.0, 6.0}) {
    const XKState s = xk_evolve(2.0, 0.0, kModel.a_inf(), kModel, t);
    EXPECT_NEAR(s.X, situation_a_separation(2.0, t, kModel), 1e-9) << t;
  }
  EXPECT_LT(std::abs(xk_evolve(2.0, 0.0, kModel.a_inf(), kModel, 40.0).X), 1e-8);
}

TEST(Gauss2, SeparationCoefficients) {
  const auto A = separation_coefficients(kModel.a_inf(), kModel);
  EXPECT_NEAR(A[0], 1.0, 1e-15);  // lambda / (lambda/omega)
  EXPECT_NEAR(A[1], 0.5, 1e-15);  // 2 lambda
}

TEST(Gauss2, SeparationDecaysFromAnyWidth) {
  oracle::Gen gen(17);
  for (int i = 0; i < 50; ++i) {
    const complex a0 = gen.width();
    const XKState s = xk_evolve(gen.uniform(-5.0, 5.0), gen.uniform(-5.0, 5.0), a0, kModel, 60.0);
    EXPECT_LT(std::hypot(s.X, s.K), 1e-6) << a0;
  }
}

TEST(Gauss2, AInfinityEigenvalues) {
  const AInfinitySystem sys = a_infinity_system(kModel);
  EXPECT_NEAR(sys.trace(), -1.0, 1e-15);
  EXPECT_NEAR(sys.determinant(), 0.5, 1e-15);
  for (const complex& e : sys.eigenvalues) {
    EXPECT_NEAR(e.real(), -0.5, 1e-15);
    EXPECT_NEAR(std::abs(e.imag()), 0.5, 1e-15);
  }
}

TEST(Gauss2, PerPacketAndDirectRoutesAgree) {
  const DoubleGaussianState s0 = DoubleGaussianState::symmetric(kModel.a_inf(), 3.0);
  const WienerPath p = sample_path(4.0, 1e-3, 8, 0);
  const DoubleRun run = simulate_double(s0, p, kModel);
  EXPECT_EQ(run.samples.size(), p.steps() + 1);
  EXPECT_EQ(run.bound_violations, 0u);
  EXPECT_LT(run.max_route_gap, 1e-9);
}

TEST(Gauss2, HittingConfigValidation) {
  EXPECT_THROW((HittingConfig{2.0, 2.0, 1.0}.validate()), PreconditionError);
  EXPECT_THROW((HittingConfig{2.0, 0.0, 2.5}.validate()), PreconditionError);
  EXPECT_THROW((HittingConfig{2.0, 0.0, 0.0}.validate()), PreconditionError);
  EXPECT_NO_THROW((HittingConfig{2.0, -1.0, 1.0}.validate()));
}

TEST(Gauss2, HittingStatsFrozen) {
  const HittingStats a = hitting_stats({2.0, 0.0, 1.0});
  EXPECT_NEAR(a.mean_S, 1.9280551601516338, 1e-14);
  EXPECT_NEAR(a.var_S, 1.6454518607389759, 1e-14);
  EXPECT_NEAR(a.p_collapse_2, 0.5, 1e-15);
  EXPECT_NEAR(a.p_deloc_bound, 0.1508873243791314, 1e-14);
  const HittingStats b = hitting_stats({2.0, 0.5, 1.0});
  EXPECT_NEAR(b.mean_S, 1.6969965815216289, 1e-14);
  EXPECT_NEAR(b.var_S, 1.6110052153504529, 1e-14);
  EXPECT_NEAR(b.p_collapse_2, 0.7396804649632877, 1e-14);
  EXPECT_NEAR(b.p_collapse_1 + b.p_collapse_2, 1.0, 1e-15);
  EXPECT_NEAR(hitting_stats({10.0, 0.0, 3.0}).p_deloc_bound, 0.0024787542327109, 1e-15);
}

TEST(Gauss2, HittingVarianceIsEvenAndPositive) {
  oracle::Gen gen(3);
  for (int i = 0; i < 200; ++i) {
    const double x = gen.uniform(0.0, 15.0);
    EXPECT_DOUBLE_EQ(hitting_variance_F(x), hitting_variance_F(-x));
    EXPECT_GE(hitting_variance_F(x), -1e-12);
  }
}

TEST(Gauss2, BornRuleFrozen) {
  const BornRule r = born_rule_check(-0.25, 0.25, 10.0);
  EXPECT_NEAR(r.exact, 0.7310585795825, 1e-12);
  EXPECT_NEAR(r.norm_ratio, 0.7310585786300, 1e-12);
  EXPECT_LT(std::abs(r.norm_ratio - r.exact), r.tolerance);
}

TEST(Gauss2, ReducedGammaIsDeterministic) {
  const HittingConfig cfg{2.0, 0.3, 1.0};
  const HitResult a = simulate_reduced_gamma(cfg, 50.0, 1e-3, 42, 7);
  const HitResult b = simulate_reduced_gamma(cfg, 50.0, 1e-3, 42, 7);
  EXPECT_EQ(a.hit_time, b.hit_time);
  EXPECT_EQ(a.outcome, b.outcome);
}

TEST(Gauss2, ReducedGammaHittingMean) {
  const HittingConfig cfg{2.0, 0.0, 1.0};
  const int n = 2000;
  double s = 0.0, s2 = 0.0;
  int upper = 0;
  for (int i = 0; i < n; ++i) {
    const HitResult r = simulate_reduced_gamma(cfg, 100.0, 1e-3, 99, i);
    ASSERT_FALSE(r.censored());
    s += r.hit_time;
    s2 += r.hit_time * r.hit_time;
    upper += r.outcome == HitOutcome::upper;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  EXPECT_LT(std::abs(mean - 1.9280551601516338), 3.0 * se);
  EXPECT_LT(std::abs(upper / double(n) - 0.5), 3.0 * std::sqrt(0.25 / n));
}

TEST(Gauss2, HorizonCensorsPaths) {
  const HitResult r = simulate_reduced_gamma({10.0, 0.0, 1.0}, 0.01, 1e-3, 1, 0);
  EXPECT_TRUE(r.censored());
  EXPECT_EQ(r.sign(), 0);
}

TEST(Gauss2, BoundingSandwichHolds) {
  const SandwichReport rep = bounding_sandwich(0.3, {3.0, 0.0, 1.0}, 60.0, 1e-3, 4, 100);
  EXPECT_EQ(rep.paths, 100u);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_GT(rep.passage_paths, 0u);
  EXPECT_EQ(rep.passage_order_violations, 0u);
  EXPECT_LE(rep.mean_upper_passage_plus, rep.mean_upper_passage_mid);
  EXPECT_LE(rep.mean_upper_passage_mid, rep.mean_upper_passage_minus);
}

TEST(Gauss2, FullDynamicsStayInsideBoundingEquations) {
  const DoubleGaussianState s0 = DoubleGaussianState::symmetric(kModel.a_inf(), 4.0);
  const FullSandwichReport rep = full_sandwich(s0, 0.5 * kModel.a_inf().real(), 2.0, 3.0, 1e-3, kModel, 6, 20);
  EXPECT_EQ(rep.paths, 20u);
  EXPECT_GT(rep.steps_checked, 0u);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_EQ(rep.bound_failures, 0u);
}
