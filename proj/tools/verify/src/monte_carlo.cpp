#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "checks.hpp"
#include "qmupl/ensemble.hpp"
#include "qmupl/gauss1.hpp"
#include "qmupl/gauss2.hpp"
#include "qmupl/moments.hpp"
#include "qmupl/stochastic.hpp"

namespace qmupl::verify {

namespace {

struct SampleSummary {
  double mean = 0;
  double var = 0;
  double se_mean = 0;
  double se_var = 0;
};

SampleSummary summarize(const std::vector<double>& v) {
  SampleSummary s;
  const double n = static_cast<double>(v.size());
  for (double x : v) s.mean += x;
  s.mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = (x - s.mean) * (x - s.mean);
    m2 += d;
    m4 += d * d;
  }
  s.var = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;
  s.se_mean = std::sqrt(s.var / n);
  s.se_var = std::sqrt((m4 - m2 * m2) / n);
  return s;
}

EnsembleSpec base_spec(const Options& o, const std::string& scenario, double horizon, double dt,
                       std::size_t record_every) {
  EnsembleSpec s;
  s.scenario = scenario;
  s.n_paths = o.n_paths;
  s.seed = o.seed;
  s.dt = dt;
  s.horizon = horizon;
  s.record_every = record_every;
  s.threads = o.threads;
  return s;
}

std::string verdict_text(const std::string& name, const OracleVerdict& v) {
  return fmt::format("{} max|z| {:.2f}, {} of {} beyond 3", name, v.max_abs_z, v.exceedances, v.z.size());
}

}  // namespace

CriterionResult hitting_time(const Options& o) {
  Check c;
  const std::size_t n = o.n_paths;
  const double s_max = 200.0;
  const double dt = 1e-3;

  const HittingConfig sym{2.0, 0.0, 1.0};
  const HittingStats ref = hitting_stats(sym);
  std::vector<double> times;
  times.reserve(n);
  std::size_t upper = 0, censored = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const HitResult r = simulate_reduced_gamma(sym, s_max, dt, o.seed, i);
    censored += r.censored();
    upper += r.outcome == HitOutcome::upper;
    times.push_back(r.hit_time);
  }
  const SampleSummary s = summarize(times);
  c.require(censored == 0, fmt::format("{} censored", censored));
  c.require(std::abs(s.mean - ref.mean_S) <= 3.0 * s.se_mean,
            fmt::format("mean {:.4f} vs {:.4f} (SE {:.4f})", s.mean, ref.mean_S, s.se_mean));
  c.require(std::abs(s.var - ref.var_S) <= 4.0 * s.se_var,
            fmt::format("var {:.4f} vs {:.4f} (SE {:.4f})", s.var, ref.var_S, s.se_var));
  const double frac = static_cast<double>(upper) / n;
  const double sig_half = std::sqrt(0.25 / n);
  c.require(std::abs(frac - 0.5) <= 3.0 * sig_half, fmt::format("+b fraction {:.4f}", frac));

  const HittingConfig biased{2.0, 0.5, 1.0};
  const double p2 = hitting_stats(biased).p_collapse_2;
  std::size_t upper_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    upper_b += simulate_reduced_gamma(biased, s_max, dt, o.seed + 1, i).outcome == HitOutcome::upper;
  }
  const double frac_b = static_cast<double>(upper_b) / n;
  const double sig_b = std::sqrt(p2 * (1.0 - p2) / n);
  c.require(std::abs(frac_b - p2) <= 3.0 * sig_b, fmt::format("b0=0.5 +b fraction {:.4f} vs {:.4f}", frac_b, p2));
  return finish(5, "hitting time and Born rule", c);
}

CriterionResult delocalization(const Options& o) {
  Check c;
  const HittingConfig cfg{2.0, 0.0, 1.0};
  const double bound = hitting_stats(cfg).p_deloc_bound;
  const std::size_t n = o.n_paths;
  std::size_t dipped = 0, hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const DelocalizationResult r = simulate_delocalization(cfg, 200.0, 15.0, 1e-3, o.seed + 2, i);
    hits += !r.hit.censored();
    dipped += r.dipped;
  }
  const double freq = static_cast<double>(dipped) / std::max<std::size_t>(hits, 1);
  const double se = std::sqrt(bound * (1.0 - bound) / std::max<std::size_t>(hits, 1));
  c.require(hits == n, fmt::format("{} of {} hit", hits, n));
  c.require(freq <= bound + 3.0 * se, fmt::format("dip frequency {:.4f} <= bound {:.4f} (+3 SE {:.4f})", freq, bound, se));
  return finish(6, "delocalization bound", c);
}

CriterionResult ensemble_classicality(const Options& o) {
  Check c;
  const Model m;
  const double k0 = 1.0;

  EnsembleSpec single = base_spec(o, "single", 5.0, 1e-2, 10);
  single.params = {{"a0_re", 2.0}, {"a0_im", 0.0}, {"k0", k0}};
  single.observables = {"q", "p"};
  const MomentStats st = run_ensemble(single);
  const std::vector<double> p_oracle(st.times().size(), m.hbar * k0);
  std::vector<double> q_oracle;
  for (double t : st.times()) q_oracle.push_back(m.hbar_over_m() * k0 * t);
  const OracleVerdict vp = score_against_oracle(st, "p", p_oracle);
  const OracleVerdict vq = score_against_oracle(st, "q", q_oracle);
  c.require(vp.pass, verdict_text("E[p] flat:", vp));
  c.require(vq.pass, verdict_text("E[q] = (1/m) int E[p]:", vq));

  EnsembleSpec stat = base_spec(o, "stationary", 5.0, 1e-2, 10);
  stat.observables = {"p", "energy"};
  const MomentStats ss = run_ensemble(stat);
  const std::vector<double> energy = ss.mean_series("energy");
  const EnergyLaw law = energy_law(m, ss.times(), energy, ss.count());
  const double rel = std::abs(law.rate_mc / law.rate_analytic - 1.0);
  c.require(rel < 0.05, fmt::format("energy slope {:.5f} vs {:.5f}", law.rate_mc, law.rate_analytic));

  const std::vector<double> vp_series = ss.variance_series("p");
  double worst = 0.0;
  for (std::size_t i = 1; i < ss.times().size(); ++i) {
    const double expect = m.lambda * m.hbar * m.hbar * ss.times()[i];
    worst = std::max(worst, std::abs(vp_series[i] / expect - 1.0));
  }
  c.require(worst < 0.05, fmt::format("V[p_t]/(lambda hbar^2 t) worst rel {:.4f}", worst));
  return finish(7, "ensemble classicality", c);
}

CriterionResult covariance_vs_mc(const Options& o) {
  Check c;
  const Model m;
  const complex a0(2.0, 0.5);
  EnsembleSpec spec = base_spec(o, "single", 5.0, 1e-3, 100);
  spec.params = {{"a0_re", a0.real()}, {"a0_im", a0.imag()}};
  spec.observables = {"q2", "qp", "p2"};
  const MomentStats st = run_ensemble(spec);
  // Means start at zero and stay zero on average, so raw second moments
  // are the covariances.
  const std::vector<CovarianceState> cov = covariance_series(st.times(), a0, m);
  std::vector<double> q2, qp, p2;
  for (const CovarianceState& s : cov) {
    q2.push_back(s.c_q2);
    qp.push_back(s.c_qp);
    p2.push_back(s.c_p2);
  }
  const OracleVerdict v1 = score_against_oracle(st, "q2", q2);
  const OracleVerdict v2 = score_against_oracle(st, "qp", qp);
  const OracleVerdict v3 = score_against_oracle(st, "p2", p2);
  c.require(v1.pass, verdict_text("C_q2", v1));
  c.require(v2.pass, verdict_text("C_qp", v2));
  c.require(v3.pass, verdict_text("C_p2", v3));
  return finish(8, "covariance equations vs Monte Carlo", c);
}

CriterionResult appendix_bounds(const Options& o) {
  Check c;
  const Model m;
  const DoubleGaussianState s0 = DoubleGaussianState::symmetric(m.a_inf(), 3.0);
  std::size_t violations = 0, steps = 0;
  double gap = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const WienerPath p = sample_path(10.0, 1e-3, o.seed + 3, i);
    const DoubleRun run = simulate_double(s0, p, m);
    violations += run.bound_violations;
    steps += p.steps();
    gap = std::max(gap, run.max_route_gap);
  }
  c.require(violations == 0, fmt::format("|g| bound broken on {} of {} steps", violations, steps));
  c.require(gap < 1e-8, fmt::format("Gamma route gap {:.1e}", gap));

  const HittingConfig cfg{3.0, 0.0, 1.0};
  for (double cc : {0.0, c_bound(1.0, 2.0)}) {
    const SandwichReport rep = bounding_sandwich(cc, cfg, 30.0, 1e-3, o.seed + 4, 1000);
    c.require(rep.violations == 0 && rep.passage_order_violations == 0,
              fmt::format("sandwich c={:.3f}: {} violations, {} order violations over {} paths", cc, rep.violations,
                          rep.passage_order_violations, rep.paths));
  }
  const FullSandwichReport full = full_sandwich(s0, 0.5 * m.a_inf().real(), 2.0, 5.0, 1e-3, m, o.seed + 5, 20);
  c.require(full.violations == 0 && full.bound_failures == 0,
            fmt::format("full dynamics inside bounds: {} violations, {} bound failures on {} steps", full.violations,
                        full.bound_failures, full.steps_checked));
  return finish(13, "correction bound and sandwich", c);
}

}  // namespace qmupl::verify
