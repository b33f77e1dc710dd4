#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qmupl/errors.hpp"
#include "qmupl/master.hpp"

using namespace qmupl;

namespace {

const Model kModel;

std::vector<double> axis(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1);
  return x;
}

DensityProfile gaussian_density(const std::vector<double>& x, double var) {
  DensityProfile d;
  d.x = x;
  for (double v : x) d.p.push_back(std::exp(-v * v / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var));
  return d;
}

double variance(const DensityProfile& d) {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    m0 += d.p[i];
    m1 += d.p[i] * d.x[i];
    m2 += d.p[i] * d.x[i] * d.x[i];
  }
  return m2 / m0 - (m1 / m0) * (m1 / m0);
}

}  // namespace

TEST(Master, AlphaFrozenSI) {
  ModelParams p;
  p.mass = 1.0;
  EXPECT_NEAR(alpha(Model::si(derive_constants(p)), 1.0) / 2.2559876735683826e43, 1.0, 1e-12);
  EXPECT_NEAR(alpha(kModel, 2.0), 0.75, 1e-15);
  EXPECT_THROW(alpha(kModel, 0.0), ParameterError);
  EXPECT_THROW(alpha(kModel.schrodinger(), 1.0), ParameterError);
}

TEST(Master, KernelAtZeroMomentum) {
  for (double x : {-2.0, 0.0, 1.5}) EXPECT_NEAR(kernel_F(0.0, x, 2.0, kModel), std::exp(-0.25 * x * x), 1e-15);
  EXPECT_EQ(kernel_F(3.0, 1.0, 0.0, kModel), 1.0);
}

TEST(Master, KernelIsSymmetricUnderJointReflection) {
  oracle::Gen gen(6);
  for (int i = 0; i < 100; ++i) {
    const double k = gen.uniform(-3, 3), x = gen.uniform(-3, 3), t = gen.uniform(0, 4);
    EXPECT_DOUBLE_EQ(kernel_F(k, x, t, kModel), kernel_F(-k, -x, t, kModel));
    EXPECT_LE(kernel_F(k, x, t, kModel), 1.0);
  }
}

TEST(Master, ConvolutionAddsCubicVariance) {
  const DensityProfile pS = gaussian_density(axis(-30.0, 30.0, 3001), 1.0);
  for (double t : {1.0, 2.0, 3.0}) {
    const DensityProfile p = density_convolve(pS, t, kModel);
    EXPECT_FALSE(p.delta_regime);
    EXPECT_NEAR(p.integral(), pS.integral(), 1e-10);
    EXPECT_NEAR(variance(p), 1.0 + t * t * t / 12.0, 1e-6) << t;
  }
}

TEST(Master, DeltaRegimeAndGap) {
  const DensityProfile pS = gaussian_density(axis(-10.0, 10.0, 2001), 1.0);  // dx = 0.01
  // 1/sqrt(alpha) = sqrt(2 t^3 / 3): below dx/10 for t = 1e-2.
  const DensityProfile tiny = density_convolve(pS, 1e-2, kModel);
  EXPECT_TRUE(tiny.delta_regime);
  EXPECT_EQ(tiny.p, pS.p);
  EXPECT_THROW(density_convolve(pS, 0.05, kModel), PreconditionError);
}

TEST(Master, EnsembleOfGaussiansReproducesMasterVariance) {
  // Mean of |psi|^2 over the noise has variance sigma_q(t)^2 + C_q2(t); the
  // master equation gives sigma_S(t)^2 + t^3/12.
  oracle::Gen gen(23);
  const Model free = kModel.schrodinger();
  for (int i = 0; i < 20; ++i) {
    const complex a0(gen.log_uniform(0.1, 3.0), gen.uniform(-1.0, 1.0));
    const double t = gen.uniform(0.2, 4.0);
    const double sq = spreads(t, a0, kModel).sigma_q;
    const double ss = spreads(t, a0, free).sigma_q;
    const double lhs = sq * sq + covariance_evolution(t, a0, kModel).c_q2;
    EXPECT_NEAR(lhs / (ss * ss + t * t * t / 12.0), 1.0, 1e-9) << a0 << " t=" << t;
  }
}

TEST(Master, PureSchrodingerDensity) {
  GaussianState s;
  s.a = complex(0.5, 0.0);
  s.k_bar = 1.0;
  const DensityProfile d = pure_schrodinger_density(s, axis(-30.0, 30.0, 6001), 2.0, kModel);
  EXPECT_NEAR(d.integral(), 1.0, 1e-10);
  const double sq = spreads(2.0, s.a, kModel.schrodinger()).sigma_q;
  EXPECT_NEAR(variance(d), sq * sq, 1e-8);
}

TEST(Master, MeasureOfLinearInterpolant) {
  DensityProfile d;
  d.x = axis(0.0, 1.0, 11);
  for (double x : d.x) d.p.push_back(2.0 * x);
  EXPECT_NEAR(measure_mu(d, 0.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(measure_mu(d, 0.25, 0.55), 0.55 * 0.55 - 0.25 * 0.25, 1e-15);
  EXPECT_THROW(measure_mu(d, -0.1, 0.5), ParameterError);
}

TEST(Master, L1Distance) {
  EXPECT_NEAR(l1_distance({1.0, 2.0, 3.0}, {1.5, 2.0, 2.0}, 0.5), 0.75, 1e-15);
  EXPECT_THROW(l1_distance({1.0}, {1.0, 2.0}, 0.1), ParameterError);
}
