#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmupl/errors.hpp"
#include "qmupl/grid.hpp"

using namespace qmupl;

namespace {

const Model kModel;

GaussianState packet(complex a, double x_bar = 0.0, double k_bar = 0.0) {
  GaussianState s;
  s.a = a;
  s.x_bar = x_bar;
  s.k_bar = k_bar;
  return s;
}

}  // namespace

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(WaveGrid(100, 10.0), ParameterError);
  EXPECT_THROW(WaveGrid(8, 10.0), ParameterError);
  EXPECT_THROW(WaveGrid(64, 0.0), ParameterError);
  EXPECT_THROW(GridPropagator(64, 10.0, kModel, 0.0), ParameterError);
}

TEST(Grid, PositionsArePeriodicCells) {
  const WaveGrid g(64, 16.0);
  EXPECT_EQ(g.x(0), -8.0);
  EXPECT_EQ(g.dx(), 0.25);
  EXPECT_EQ(g.positions().back(), 8.0 - 0.25);
}

TEST(Grid, GaussianMomentsMatchWidth) {
  oracle::Gen gen(10);
  for (int i = 0; i < 30; ++i) {
    const complex a(gen.log_uniform(0.3, 3.0), gen.uniform(-1.0, 1.0));
    const double xb = gen.uniform(-2.0, 2.0);
    const double kb = gen.uniform(-2.0, 2.0);
    const WaveGrid g = gaussian_wave(1024, 40.0, packet(a, xb, kb));
    EXPECT_NEAR(norm_squared(g), 1.0, 1e-12);
    const GridMoments m = grid_moments(g, kModel);
    const Spreads s = spreads_of(a, kModel);
    EXPECT_NEAR(m.mean_q, xb, 1e-10);
    EXPECT_NEAR(m.var_q, s.sigma_q * s.sigma_q, 1e-10);
    EXPECT_NEAR(m.mean_p, kb, 1e-9);
    EXPECT_NEAR(m.var_p, s.sigma_p * s.sigma_p, 1e-8);
    EXPECT_NEAR(m.sigma_qp, -a.imag() / (2.0 * a.real()), 1e-9);
  }
}

TEST(Grid, DeltaAVanishesAtStationaryWidth) {
  EXPECT_NEAR(delta_A_gaussian(kModel.a_inf(), kModel).delta_A, 0.0, 1e-15);
  const WaveGrid g = gaussian_wave(1024, 40.0, packet(kModel.a_inf(), 1.0, 0.5));
  EXPECT_NEAR(delta_A(g, kModel).delta_A, 0.0, 1e-9);
}

TEST(Grid, DeltaAOnGridMatchesWidthFormula) {
  oracle::Gen gen(14);
  for (int i = 0; i < 20; ++i) {
    const complex a(gen.log_uniform(0.3, 3.0), gen.uniform(-1.0, 1.0));
    const DeltaADiagnostic ref = delta_A_gaussian(a, kModel);
    const DeltaADiagnostic got = delta_A(gaussian_wave(1024, 40.0, packet(a)), kModel);
    EXPECT_NEAR(got.delta_A, ref.delta_A, 1e-8);
    EXPECT_GE(ref.delta_A, -1e-12);
  }
}

TEST(Grid, DoubleGaussianMeanMatchesClosedForm) {
  DoubleGaussianState s = DoubleGaussianState::symmetric(complex(0.8, 0.2), 3.0, 1.0, 0.4);
  s.gamma_2 += complex(0.0, 1.1);
  const WaveGrid g = double_gaussian_wave(2048, 60.0, s);
  EXPECT_NEAR(grid_mean_q(g), quantum_mean_double(s), 1e-10);
}

TEST(Grid, DistanceIgnoresGlobalPhase) {
  const WaveGrid a = gaussian_wave(256, 20.0, packet(complex(1.0, 0.3)));
  WaveGrid b = a;
  for (complex& v : b.psi) v *= std::polar(1.0, 0.7);
  EXPECT_LT(l2_distance(a, b), 1e-7);
  const WaveGrid c = gaussian_wave(256, 20.0, packet(complex(1.0, 0.3), 0.5));
  EXPECT_GT(l2_distance(a, c), 0.1);
  EXPECT_THROW(l2_distance(a, WaveGrid(128, 20.0)), ParameterError);
}

TEST(Grid, IntervalProbability) {
  const WaveGrid g = gaussian_wave(4096, 40.0, packet(complex(0.25, 0.0)));  // sigma_q = 1
  EXPECT_NEAR(interval_probability(g, -20.0, 20.0 - g.dx()), 1.0, 1e-12);
  EXPECT_NEAR(interval_probability(g, -3.0, 3.0), 0.9973002039367398, 2e-4);
  EXPECT_THROW(interval_probability(g, -30.0, 0.0), ParameterError);
}

TEST(Grid, ContainmentDetectsEdges) {
  const WaveGrid wide = gaussian_wave(256, 10.0, packet(complex(0.05, 0.0)));
  EXPECT_THROW(check_containment(wide), ContainmentError);
  EXPECT_NO_THROW(check_containment(gaussian_wave(256, 40.0, packet(complex(0.5, 0.0)))));
}

TEST(Grid, FreeEvolutionIsExact) {
  const Model free = kModel.schrodinger();
  const GaussianState s0 = packet(complex(0.7, 0.1), -1.0, 1.5);
  const WaveGrid g0 = gaussian_wave(1024, 60.0, s0);
  const WienerPath p = sample_path(2.0, 1e-2, 0, 0);
  const NonlinearRun run = evolve_nonlinear(g0, free, p);
  const GaussianState s1 = packet(a_exact(2.0, s0.a, free), -1.0 + 1.5 * 2.0, 1.5);
  EXPECT_LT(l2_distance(run.final, gaussian_wave(1024, 60.0, s1)), 1e-9);
  EXPECT_NEAR(run.final.t, 2.0, 1e-12);
}

TEST(Grid, NonlinearEvolutionTracksGaussianParameters) {
  const GaussianState s0 = packet(complex(0.5, 0.0), 0.0, 0.5);
  const WaveGrid g0 = gaussian_wave(512, 32.0, s0);
  const WienerPath p = sample_path(1.0, 1e-4, 3, 0);
  const NonlinearRun run = evolve_nonlinear(g0, kModel, p);
  GaussianState s = s0;
  for (double dW : p.increments) s = step_means(s, dW, p.dt, kModel);
  EXPECT_LT(l2_distance(run.final, gaussian_wave(512, 32.0, s)), 1e-3);
  EXPECT_LT(run.max_norm_drift, 1e-2);
  EXPECT_EQ(run.mean_history.size(), p.steps());
}

TEST(Grid, ObserverSeesRecordPoints) {
  const WaveGrid g0 = gaussian_wave(256, 32.0, packet(complex(0.5, 0.0)));
  const WienerPath p = sample_path(0.1, 1e-3, 3, 0);  // 100 steps
  std::vector<std::size_t> seen;
  GridRunOptions opt;
  opt.record_every = 30;
  opt.observer = [&](const WaveGrid&, std::size_t step) { seen.push_back(step); };
  evolve_nonlinear(g0, kModel, p, opt);
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 30, 60, 90, 100}));
}

TEST(Grid, LinearRouteMatchesNonlinearUnderShiftedNoise) {
  const DoubleGaussianState s0 = DoubleGaussianState::symmetric(kModel.a_inf(), 3.0);
  const WaveGrid g0 = double_gaussian_wave(512, 40.0, s0);
  const WienerPath xi = sample_path(1.0, 1e-4, 21, 0);
  const LinearRun lin = evolve_linear_then_normalize(g0, kModel, xi);
  ASSERT_EQ(lin.physical_noise.steps(), xi.steps());
  ASSERT_EQ(lin.log_norm.size(), xi.steps());
  const NonlinearRun non = evolve_nonlinear(g0, kModel, lin.physical_noise);
  EXPECT_LT(l2_distance(lin.final, non.final), 1e-3);
}

TEST(Grid, ConvergenceReportNeedsEnoughPaths) {
  const std::vector<double> t{0.0, 1.0}, m{1.0, 0.5}, se{0.01, 0.01};
  EXPECT_THROW(collapse_convergence_report(t, m, se, 499), PreconditionError);
}

TEST(Grid, ConvergenceReportJudgesMonotonicity) {
  std::vector<double> t, m, se;
  for (int i = 0; i < 20; ++i) {
    t.push_back(i);
    m.push_back(std::exp(-0.5 * i));
    se.push_back(1e-4);
  }
  const CollapseConvergence good = collapse_convergence_report(t, m, se, 500);
  EXPECT_TRUE(good.non_increasing);
  EXPECT_NEAR(good.late_decay_rate, 0.5, 1e-9);
  m[12] = m[5];
  const CollapseConvergence bad = collapse_convergence_report(t, m, se, 500);
  EXPECT_FALSE(bad.non_increasing);
  EXPECT_EQ(bad.worst_index, 12u);
}
