#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qmupl/errors.hpp"
#include "qmupl/units.hpp"

using namespace qmupl;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Units, RejectsNonPositiveParameters) {
  ModelParams p;
  p.mass = 0.0;
  EXPECT_THROW(derive_constants(p), ParameterError);
  p = ModelParams{};
  p.lambda0 = -1.0;
  EXPECT_THROW(derive_constants(p), ParameterError);
  p = ModelParams{};
  p.hbar = std::nan("");
  EXPECT_THROW(derive_constants(p), ParameterError);
}

TEST(Units, UnknownPresetIsRejected) { EXPECT_THROW(preset("proton-ish"), ParameterError); }

TEST(Units, NucleonFrequencyAndSpread) {
  const DerivedConstants c = derive_constants(preset("nucleon"));
  EXPECT_GE(c.omega, 1e-5);
  EXPECT_LT(c.omega, 1e-4);
  EXPECT_NEAR(c.omega, 5.02191298730543717e-5, 1e-17);
  EXPECT_NEAR(c.sigma_q_inf, 0.0354327284699662847, 1e-15);
  EXPECT_GT(c.sigma_q_inf, 0.003);
  EXPECT_LT(c.sigma_q_inf, 0.3);
}

TEST(Units, DerivedInvariantsHoldForManyMasses) {
  oracle::Gen gen(11);
  const DerivedConstants ref = derive_constants(preset("nucleon"));
  for (int i = 0; i < 200; ++i) {
    ModelParams p;
    p.mass = gen.log_uniform(1e-31, 1e25);
    const DerivedConstants c = derive_constants(p);
    EXPECT_LT(rel(c.omega, ref.omega), 1e-12);
    EXPECT_LT(rel(c.lambda, p.mass / p.reference_mass * p.lambda0), 1e-15);
    EXPECT_LT(rel(c.sigma_q_inf * c.sigma_p_inf, p.hbar / std::sqrt(2.0)), 1e-12);
    EXPECT_LT(rel(c.a_inf.real(), c.lambda / c.omega), 1e-15);
    EXPECT_LT(rel(c.a_inf.imag(), -c.lambda / c.omega), 1e-15);
    EXPECT_LT(rel(c.energy_rate, ref.energy_rate), 1e-12);
  }
}

TEST(Units, DeriveIsBitReproducible) {
  const DerivedConstants a = derive_constants(preset("electron"));
  const DerivedConstants b = derive_constants(preset("electron"));
  EXPECT_EQ(a.omega, b.omega);
  EXPECT_EQ(a.sigma_q_inf, b.sigma_q_inf);
  EXPECT_EQ(a.a_inf, b.a_inf);
  EXPECT_EQ(a.lambda_cm(3.0), b.lambda_cm(3.0));
}

TEST(Units, CenterOfMassRateOfIdenticalNucleons) {
  const DerivedConstants c = derive_constants(preset("nucleon"));
  for (double n : {1.0, 7.0, 1e6, 1e24}) {
    EXPECT_DOUBLE_EQ(c.lambda_cm(n * c.params.reference_mass), n * c.params.lambda0);
  }
}

TEST(Units, ScaleRoundTripOnRandomValues) {
  oracle::Gen gen(5);
  for (const char* name : {"electron", "nucleon", "gram", "earth"}) {
    const Scale s(derive_constants(preset(name)));
    for (int i = 0; i < 100; ++i) {
      const double v = gen.log_uniform(1e-20, 1e20) * (gen.uniform(0, 1) < 0.5 ? -1 : 1);
      EXPECT_LT(rel(s.time_to_si(s.time_from_si(v)), v), 1e-12);
      EXPECT_LT(rel(s.length_to_si(s.length_from_si(v)), v), 1e-12);
      EXPECT_LT(rel(s.wavenumber_to_si(s.wavenumber_from_si(v)), v), 1e-12);
      EXPECT_LT(rel(s.momentum_to_si(s.momentum_from_si(v)), v), 1e-12);
      EXPECT_LT(rel(s.energy_to_si(s.energy_from_si(v)), v), 1e-12);
      EXPECT_LT(rel(s.cov_q2_to_si(s.cov_q2_from_si(v)), v), 1e-12);
      EXPECT_LT(rel(s.cov_qp_to_si(s.cov_qp_from_si(v)), v), 1e-12);
      EXPECT_LT(rel(s.cov_p2_to_si(s.cov_p2_from_si(v)), v), 1e-12);
      const complex a(v, -0.5 * v);
      EXPECT_LT(std::abs(s.width_to_si(s.width_from_si(a)) - a) / std::abs(a), 1e-12);
    }
  }
}

TEST(Units, DimensionlessModelIsCanonical) {
  for (const char* name : {"electron", "nucleon", "gram", "earth"}) {
    const Model m = Model::dimensionless(derive_constants(preset(name)));
    EXPECT_NEAR(m.hbar, 1.0, 1e-14);
    EXPECT_NEAR(m.mass, 1.0, 1e-14);
    EXPECT_NEAR(m.lambda, 0.25, 1e-13);
    EXPECT_NEAR(m.omega(), 1.0, 1e-13);
  }
}

TEST(Units, SuppressionTimeEstimates) {
  const MicroMacroEstimates e = macro_micro_estimates(preset("electron"), 1.0);
  EXPECT_NEAR(e.expected_suppression_time, 1836152.67344000132, 1e-6);
  EXPECT_GT(e.expected_suppression_time, 1e6 / 5);
  EXPECT_LT(e.expected_suppression_time, 1e6 * 5);
  const MicroMacroEstimates n = macro_micro_estimates(preset("nucleon"), 1.0);
  EXPECT_NEAR(n.expected_suppression_time, 1000.0, 1e-9);
  const MicroMacroEstimates g = macro_micro_estimates(preset("gram"), 1.0);
  EXPECT_NEAR(g.sigma_q_inf, 4.58251070959758229e-14, 1e-26);
  EXPECT_THROW(macro_micro_estimates(preset("nucleon"), 0.0), DomainError);
}

TEST(Units, FluctuationDampingLimits) {
  const DerivedConstants c = derive_constants(preset("gram"));
  const FluctuationDamping z = fluctuation_damping(c, 0.0);
  EXPECT_EQ(z.var_q, 0.0);
  EXPECT_EQ(z.var_p, 0.0);
  EXPECT_NEAR(z.prefactor, 1.04997022017882686e-27, 1e-39);
  const FluctuationDamping a = fluctuation_damping(c, 10.0);
  const FluctuationDamping b = fluctuation_damping(c, 20.0);
  EXPECT_NEAR(b.var_p, 2.0 * a.var_p, 1e-15 * b.var_p);
  EXPECT_FALSE(FluctuationDamping::assumption.empty());
}

TEST(Units, EnergyRateIsMassIndependent) {
  const DerivedConstants e = derive_constants(preset("electron"));
  const DerivedConstants g = derive_constants(preset("gram"));
  EXPECT_LT(rel(e.energy_rate, g.energy_rate), 1e-12);
  EXPECT_NEAR(e.energy_rate, 3.32448624957997273e-44, 1e-56);
}
