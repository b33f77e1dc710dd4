#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qmupl/errors.hpp"
#include "qmupl/moments.hpp"

using namespace qmupl;

namespace {

struct TwoPass {
  double mean = 0;
  double var = 0;
};

TwoPass two_pass(const std::vector<double>& v) {
  TwoPass r;
  for (double x : v) r.mean += x;
  r.mean /= v.size();
  for (double x : v) r.var += (x - r.mean) * (x - r.mean);
  r.var /= v.size() - 1;
  return r;
}

}  // namespace

TEST(Moments, UndefinedVarianceIsNaN) {
  RunningMoments m;
  EXPECT_TRUE(std::isnan(m.variance()));
  m.add(3.0);
  EXPECT_FALSE(m.variance_defined());
  EXPECT_TRUE(std::isnan(m.standard_error()));
  EXPECT_EQ(m.mean, 3.0);
}

TEST(Moments, WelfordMatchesTwoPass) {
  oracle::Gen gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(2 + trial * 7);
    const double shift = gen.uniform(-1e6, 1e6);
    for (double& x : v) x = shift + gen.uniform(-1.0, 1.0);
    RunningMoments m;
    for (double x : v) m.add(x);
    const TwoPass ref = two_pass(v);
    EXPECT_NEAR(m.mean, ref.mean, 1e-9);
    EXPECT_NEAR(m.variance(), ref.var, 1e-8 * (1.0 + ref.var));
    EXPECT_NEAR(m.standard_error(), std::sqrt(ref.var / v.size()), 1e-8);
  }
}

TEST(Moments, MergeMatchesSequentialForAnySplit) {
  oracle::Gen gen(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(gen.uniform(0.0, 100.0));
    std::vector<double> v(n);
    for (double& x : v) x = gen.uniform(-5.0, 5.0);
    const std::size_t cut = static_cast<std::size_t>(gen.uniform(0.0, double(n) + 0.999));
    RunningMoments all, left, right;
    for (std::size_t i = 0; i < n; ++i) {
      all.add(v[i]);
      (i < cut ? left : right).add(v[i]);
    }
    left.merge(right);
    EXPECT_EQ(left.n, all.n);
    EXPECT_NEAR(left.mean, all.mean, 1e-12);
    EXPECT_NEAR(left.m2, all.m2, 1e-9);
  }
}

TEST(Moments, MergeWithEmptyIsIdentity) {
  RunningMoments a;
  a.add(1.0);
  a.add(2.0);
  const RunningMoments before = a;
  a.merge(RunningMoments{});
  EXPECT_EQ(a.n, before.n);
  EXPECT_EQ(a.mean, before.mean);
  RunningMoments e;
  e.merge(before);
  EXPECT_EQ(e.m2, before.m2);
}

TEST(Moments, StatsLayoutIsObservableMajor) {
  MomentStats s({"a", "b"}, {0.0, 1.0, 2.0});
  s.add_path(std::vector<double>{1, 2, 3, 10, 20, 30});
  s.add_path(std::vector<double>{3, 4, 5, 30, 40, 50});
  EXPECT_EQ(s.count(), 2u);
  EXPECT_EQ(s.mean(0, 2), 4.0);
  EXPECT_EQ(s.mean(1, 0), 20.0);
  EXPECT_EQ(s.observable_index("b"), 1u);
  EXPECT_EQ(s.mean_series("b"), (std::vector<double>{20.0, 30.0, 40.0}));
  EXPECT_EQ(s.variance_series("a"), (std::vector<double>{2.0, 2.0, 2.0}));
  EXPECT_THROW((void)s.observable_index("c"), ParameterError);
  EXPECT_THROW(s.add_path(std::vector<double>{1, 2}), ParameterError);
  EXPECT_THROW((void)s.cell(2, 0), ParameterError);
}

TEST(Moments, StatsMergeRequiresSameLayout) {
  MomentStats a({"a"}, {0.0, 1.0});
  MomentStats b({"a"}, {0.0, 2.0});
  EXPECT_THROW(a.merge(b), ParameterError);
  MomentStats c({"a"}, {0.0, 1.0});
  c.add_path(std::vector<double>{1.0, 2.0});
  a.merge(c);
  EXPECT_EQ(a.count(), 1u);
  EXPECT_FALSE(a.variance_defined());
}
