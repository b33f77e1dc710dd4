#include "commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "output.hpp"
#include "qmupl/cli.hpp"
#include "qmupl/ensemble.hpp"
#include "qmupl/errors.hpp"
#include "qmupl/gauss1.hpp"
#include "qmupl/gauss2.hpp"
#include "qmupl/grid.hpp"
#include "qmupl/master.hpp"
#include "qmupl/scenarios.hpp"
#include "qmupl/stochastic.hpp"
#include "qmupl/verify.hpp"

namespace qmupl::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const Model kDimensionless;

complex width_or_stationary(const WidthArgs& w) {
  if (w.a0_re == 0.0 && w.a0_im == 0.0) return kDimensionless.a_inf();
  return {w.a0_re, w.a0_im};
}

OutputSet outputs(const Common& c) { return OutputSet(c.out, c.csv(), c.svg()); }

void print_files(std::ostream& out, const Common& c, const OutputSet& o) {
  for (const std::string& f : o.files()) fmt::print(out, "wrote {}/{}\n", c.out, f);
  fmt::print(out, "wrote {}/manifest.json\n", c.out);
}

std::string json_number(double v) { return std::isfinite(v) ? fmt::format("{:.17g}", v) : "null"; }

}  // namespace

ModelParams Common::params() const {
  if (preset == "custom") {
    if ((nucleons > 0.0) == (mass > 0.0)) {
      throw ConfigError("preset 'custom' needs exactly one of --nucleons or --mass");
    }
    if (nucleons > 0.0) return qmupl::nucleons(nucleons);
    ModelParams p;
    p.mass = mass;
    p.validate();
    return p;
  }
  if (nucleons > 0.0 || mass > 0.0) throw ConfigError("--nucleons and --mass need --preset custom");
  return qmupl::preset(preset);
}

int cmd_constants(const Common& c, const ConstantsArgs& a, std::ostream& out) {
  const DerivedConstants d = derive_constants(c.params());
  const Scale sc(d);
  const Model si = Model::si(d);
  const MicroMacroEstimates est = macro_micro_estimates(d.params, a.separation, a.b);
  const FluctuationDamping fd = fluctuation_damping(d, a.t);
  const double t_dim = sc.time_from_si(a.t);
  std::vector<Row> rows{
      {"mass_kg", {d.params.mass, 1.0}},
      {"lambda", {d.lambda, kDimensionless.lambda}},
      {"omega", {d.omega, 1.0}},
      {"length_unit_m", {d.length_unit, 1.0}},
      {"time_unit_s", {d.time_unit, 1.0}},
      {"sigma_q_inf_m", {d.sigma_q_inf, sc.length_from_si(d.sigma_q_inf)}},
      {"sigma_p_inf_kg_m_per_s", {d.sigma_p_inf, sc.momentum_from_si(d.sigma_p_inf)}},
      {"a_inf_re", {d.a_inf.real(), sc.width_from_si(d.a_inf).real()}},
      {"a_inf_im", {d.a_inf.imag(), sc.width_from_si(d.a_inf).imag()}},
      {"energy_rate_J_per_s", {d.energy_rate, sc.rate_from_si(sc.energy_from_si(d.energy_rate))}},
      {"alpha_at_t", {alpha(si, a.t), alpha(kDimensionless, t_dim)}},
      {"expected_suppression_time_s", {est.expected_suppression_time, sc.time_from_si(est.expected_suppression_time)}},
      {"var_q_mean_at_t_m2", {fd.var_q, sc.cov_q2_from_si(fd.var_q)}},
      {"var_p_mean_at_t", {fd.var_p, sc.cov_p2_from_si(fd.var_p)}},
  };
  OutputSet o = outputs(c);
  o.write_text("constants.csv", table_text({"name", "si_value", "dimensionless_value"}, rows));
  o.write_manifest("constants", c.seed, c.config_text);
  for (const Row& r : rows) fmt::print(out, "{:<30} {:>24.10g} {:>24.10g}\n", r.label, r.values[0], r.values[1]);
  print_files(out, c, o);
  return 0;
}

int cmd_single(const Common& c, const SingleArgs& a, std::ostream& out) {
  if (a.sigma0.empty()) throw ConfigError("single needs at least one --sigma0");
  if (a.points < 2) throw ConfigError("--points must be at least 2");
  const DerivedConstants d = derive_constants(c.params());
  const Scale sc(d);
  const Model free = kDimensionless.schrodinger();
  const double horizon = a.horizon > 0.0 ? a.horizon : 10.0 * d.time_unit;

  std::vector<double> t_si(a.points);
  for (std::size_t k = 0; k < a.points; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(a.points - 1);
    t_si[k] = a.log_time ? horizon * std::pow(10.0, -6.0 * (1.0 - f)) : horizon * f;
  }
  std::vector<Column> cols{{"t_s", t_si}};
  Chart chart{"Position spread", "t (s)", "sigma_q (m)", a.log_time, true, {}};
  std::string summary = fmt::format("{{\n  \"sigma_q_inf_m\": {},\n  \"threshold_m\": {},\n  \"curves\": [",
                                    json_number(d.sigma_q_inf), json_number(a.threshold));

  for (std::size_t i = 0; i < a.sigma0.size(); ++i) {
    const double s0 = a.sigma0[i];
    if (!(s0 > 0.0)) throw ParameterError("--sigma0 must be positive");
    const complex a0 = sc.width_from_si(complex(1.0 / (4.0 * s0 * s0), 0.0));
    auto collapse_sigma = [&](double t) {
      return sc.length_to_si(spreads(sc.time_from_si(t), a0, kDimensionless).sigma_q);
    };
    Column sch{fmt::format("sigma_q_schrodinger_{:g}", s0), {}};
    Column col{fmt::format("sigma_q_collapse_{:g}", s0), {}};
    Column mean{fmt::format("mean_q_sample_{:g}", s0), {}};
    NormalStream noise(c.seed, i);
    GaussianState g;
    g.a = a0;
    double t_prev = 0.0;
    for (double t : t_si) {
      const double dt = sc.time_from_si(t - t_prev);
      if (dt > 0.0) g = step_means(g, std::sqrt(dt) * noise.normal(), dt, kDimensionless);
      t_prev = t;
      sch.values.push_back(sc.length_to_si(spreads(sc.time_from_si(t), a0, free).sigma_q));
      col.values.push_back(collapse_sigma(t));
      mean.values.push_back(sc.length_to_si(g.x_bar));
    }
    // First time the collapse spread falls below the threshold.
    double below = kNaN;
    if (s0 <= a.threshold) {
      below = 0.0;
    } else {
      double lo = 0.0;
      constexpr int kScan = 4000;
      for (int k = 1; k <= kScan; ++k) {
        const double t = horizon * std::pow(10.0, -12.0 * (1.0 - double(k) / kScan));
        if (collapse_sigma(t) < a.threshold) {
          double hi = t;
          for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (collapse_sigma(mid) < a.threshold ? hi : lo) = mid;
          }
          below = hi;
          break;
        }
        lo = t;
      }
    }
    fmt::print(out, "sigma0 {:.3e} m: sigma_q(T) {:.4e} m (Schrodinger {:.4e} m), below {:.1e} m after {}\n", s0,
               col.values.back(), sch.values.back(), a.threshold,
               std::isnan(below) ? std::string("never") : fmt::format("{:.4e} s", below));
    summary += fmt::format("{}\n    {{\"sigma0_m\": {}, \"sigma_q_final_m\": {}, \"time_below_threshold_s\": {}}}",
                           i ? "," : "", json_number(s0), json_number(col.values.back()), json_number(below));
    chart.series.push_back({fmt::format("Schrodinger, {:g} m", s0), t_si, sch.values});
    chart.series.push_back({fmt::format("collapse, {:g} m", s0), t_si, col.values});
    cols.push_back(std::move(sch));
    cols.push_back(std::move(col));
    cols.push_back(std::move(mean));
  }
  summary += "\n  ]\n}\n";
  fmt::print(out, "sigma_q(inf) = {:.4e} m\n", d.sigma_q_inf);

  OutputSet o = outputs(c);
  o.write_csv("single.csv", cols);
  o.write_svg("single.svg", chart);
  o.write_text("summary.json", summary);
  o.write_manifest("single", c.seed, c.config_text);
  print_files(out, c, o);
  return 0;
}

int cmd_double(const Common& c, const DoubleArgs& a, std::ostream& out) {
  if (a.record_every == 0) throw ConfigError("--record-every must be at least 1");
  const DoubleGaussianState s0 =
      DoubleGaussianState::symmetric(width_or_stationary(a.width), a.X0, a.K0, a.gamma0);
  s0.validate();
  const WienerPath path = sample_path(a.horizon, a.dt, c.seed, 0);
  const DoubleRun run = simulate_double(s0, path, kDimensionless);
  Column t{"t", {}}, X{"X", {}}, gr{"gamma_r", {}}, mq{"mean_q", {}}, g{"g", {}}, gb{"g_bound", {}};
  for (std::size_t i = 0; i < run.samples.size(); ++i) {
    if (i % a.record_every != 0 && i + 1 != run.samples.size()) continue;
    const DoubleSample& s = run.samples[i];
    t.values.push_back(s.t);
    X.values.push_back(s.X);
    gr.values.push_back(s.gamma_r);
    mq.values.push_back(s.mean_q);
    g.values.push_back(s.g);
    gb.values.push_back(s.g_bound);
  }
  OutputSet o = outputs(c);
  o.write_csv("double.csv", {t, X, gr, mq, g, gb});
  o.write_svg("double.svg", Chart{"Double Gaussian", "t", "", false, false,
                                  {{"Gamma^R", t.values, gr.values}, {"X", t.values, X.values},
                                   {"<q>", t.values, mq.values}}});
  o.write_manifest("double", c.seed, c.config_text);
  fmt::print(out, "final Gamma^R {:.6f}, X {:.6e}, <q> {:.6f}\n", gr.values.back(), X.values.back(),
             mq.values.back());
  fmt::print(out, "steps over the overlap bound: {}, route gap {:.2e}\n", run.bound_violations, run.max_route_gap);
  print_files(out, c, o);
  return 0;
}

int cmd_grid(const Common& c, const GridArgs& a, std::ostream& out) {
  if (a.record_every == 0) throw ConfigError("--record-every must be at least 1");
  const DoubleGaussianState s0 = DoubleGaussianState::symmetric(width_or_stationary(a.width), a.X0, 0.0, a.gamma0);
  const WaveGrid g0 = double_gaussian_wave(a.n_points, a.extent, s0);
  check_containment(g0);
  const WienerPath path = sample_path(a.horizon, a.dt, c.seed, 0);
  Column t{"t", {}}, mq{"mean_q", {}}, vq{"var_q", {}}, dA{"delta_A", {}}, pr{"p_right", {}};
  GridRunOptions opt;
  opt.record_every = a.record_every;
  opt.observer = [&](const WaveGrid& g, std::size_t) {
    const DeltaADiagnostic d = delta_A(g, kDimensionless);
    t.values.push_back(g.t);
    mq.values.push_back(grid_mean_q(g));
    vq.values.push_back(d.delta_q);
    dA.values.push_back(d.delta_A);
    pr.values.push_back(interval_probability(g, 0.0, g.x(g.n_points - 1)));
  };
  const NonlinearRun run = evolve_nonlinear(g0, kDimensionless, path, opt);
  OutputSet o = outputs(c);
  o.write_csv("grid.csv", {t, mq, vq, dA, pr});
  const std::vector<double> x = run.final.positions();
  const std::vector<double> rho = run.final.density();
  o.write_csv("grid_density.csv", {{"x", x}, {"density", rho}});
  o.write_svg("grid.svg", Chart{"Delta A on the grid", "t", "Delta A", false, true, {{"Delta A", t.values, dA.values}}});
  o.write_svg("grid_density.svg", Chart{fmt::format("|psi|^2 at t = {:g}", run.final.t), "x", "density", false,
                                        false, {{"final", x, rho}}});
  o.write_manifest("grid", c.seed, c.config_text);
  fmt::print(out, "Delta A {:.4e} -> {:.4e}; P(x > 0) at the end {:.6f}; max norm drift {:.2e}\n",
             dA.values.front(), dA.values.back(), pr.values.back(), run.max_norm_drift);
  print_files(out, c, o);
  return 0;
}

int cmd_master(const Common& c, const MasterArgs& a, std::ostream& out) {
  GaussianState s;
  s.a = complex(a.a0_re, a.a0_im);
  s.x_bar = a.x0;
  s.k_bar = a.k0;
  s.validate();
  const std::vector<double> x = WaveGrid(a.n_points, a.extent).positions();
  const DensityProfile ps = pure_schrodinger_density(s, x, a.t, kDimensionless);
  const DensityProfile pm = density_convolve(ps, a.t, kDimensionless);
  OutputSet o = outputs(c);
  o.write_csv("master.csv", {{"x", x}, {"p_schrodinger", ps.p}, {"p_master", pm.p}});
  o.write_svg("master.svg", Chart{fmt::format("Position density at t = {:g}", a.t), "x", "density", false, false,
                                  {{"Schrodinger", x, ps.p}, {"collapse", x, pm.p}}});
  o.write_manifest("master", c.seed, c.config_text);
  fmt::print(out, "alpha {:.6e}{}; mu([{:g}, {:g}]) = {:.6f} (Schrodinger {:.6f}); L1 gap {:.4e}\n",
             alpha(kDimensionless, a.t), pm.delta_regime ? " (delta regime)" : "", a.lo, a.hi,
             measure_mu(pm, a.lo, a.hi), measure_mu(ps, a.lo, a.hi), l1_distance(pm.p, ps.p, pm.dx()));
  print_files(out, c, o);
  return 0;
}

int cmd_hitting(const Common& c, const HittingArgs& a, std::ostream& out) {
  const HittingConfig cfg{a.b, a.b0, a.eta};
  cfg.validate();
  if (a.n_paths < 2) throw ConfigError("--paths must be at least 2");
  if (a.bins == 0) throw ConfigError("--bins must be at least 1");
  ReducedOptions opts;
  opts.bridge = !a.no_bridge;
  std::vector<double> times;
  std::size_t upper = 0, dipped = 0;
  for (std::size_t i = 0; i < a.n_paths; ++i) {
    const DelocalizationResult r = simulate_delocalization(cfg, a.s_max, a.s_after, a.dt, c.seed, i, opts);
    if (r.hit.censored()) continue;
    times.push_back(r.hit.hit_time);
    upper += r.hit.outcome == HitOutcome::upper;
    dipped += r.dipped;
  }
  if (times.size() < 2) throw NumericError("fewer than two paths hit the threshold; raise --s-max");
  const double n = static_cast<double>(times.size());
  RunningMoments m;
  for (double v : times) m.add(v);
  double m4 = 0.0;
  for (double v : times) m4 += std::pow(v - m.mean, 4) / n;
  const double m2 = m.m2 / n;
  const HittingStats ref = hitting_stats(cfg);
  const double pu = upper / n, pd = dipped / n;
  const std::vector<Row> rows{
      {"mean_hit_time", {m.mean, m.standard_error(), ref.mean_S}},
      {"var_hit_time", {m.variance(), std::sqrt((m4 - m2 * m2) / n), ref.var_S}},
      {"p_upper", {pu, std::sqrt(pu * (1.0 - pu) / n), ref.p_collapse_2}},
      {"p_dip", {pd, std::sqrt(pd * (1.0 - pd) / n), ref.p_deloc_bound}},
      {"censored_fraction", {1.0 - n / static_cast<double>(a.n_paths), kNaN, 0.0}},
  };
  const double hi = *std::max_element(times.begin(), times.end());
  const double w = hi / static_cast<double>(a.bins);
  std::vector<double> centre(a.bins), dens(a.bins, 0.0);
  for (std::size_t k = 0; k < a.bins; ++k) centre[k] = (k + 0.5) * w;
  for (double v : times) dens[std::min(a.bins - 1, static_cast<std::size_t>(v / w))] += 1.0 / (n * w);

  OutputSet o = outputs(c);
  o.write_text("hitting.csv", table_text({"quantity", "monte_carlo", "stderr", "closed_form"}, rows));
  o.write_csv("hitting_hist.csv", {{"hit_time", centre}, {"density", dens}});
  o.write_svg("hitting_hist.svg", Chart{"Hitting time of the threshold", "s", "density", false, false,
                                        {{"Monte Carlo", centre, dens}}});
  o.write_manifest("hitting", c.seed, c.config_text);
  for (const Row& r : rows)
    fmt::print(out, "{:<18} {:>12.6f} +- {:<10.6f} closed form {:.6f}\n", r.label, r.values[0], r.values[1],
               r.values[2]);
  print_files(out, c, o);
  return 0;
}

namespace {

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("parameter '" + item + "' is not key=value");
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() - eq - 1) throw ConfigError("parameter '" + item + "' is not numeric");
    out[item.substr(0, eq)] = v;
  }
  return out;
}

std::optional<std::vector<double>> oracle_for(const EnsembleSpec& spec, const std::string& obs,
                                               const std::vector<double>& times) {
  const std::vector<double>& ts = times;
  auto fill = [&](auto f) {
    std::vector<double> v;
    for (double t : ts) v.push_back(f(t));
    return std::optional<std::vector<double>>(v);
  };
  if (spec.scenario == "single" || spec.scenario == "stationary") {
    const Model m = scenario_model(spec);
    const double x0 = spec.param("x0", 0.0), k0 = spec.param("k0", 0.0);
    const complex a0 = spec.scenario == "stationary" ? m.a_inf()
                                                     : complex(spec.param("a0_re", 0.5), spec.param("a0_im", 0.0));
    if (obs == "p") return fill([&](double) { return m.hbar * k0; });
    if (obs == "q") return fill([&](double t) { return x0 + m.hbar_over_m() * k0 * t; });
    if (obs == "sigma_q") return fill([&](double t) { return spreads(t, a0, m).sigma_q; });
    if ((obs == "q2" || obs == "qp" || obs == "p2") && x0 == 0.0 && k0 == 0.0 && m.lambda > 0.0) {
      const std::vector<CovarianceState> cov = covariance_series(ts, a0, m);
      std::vector<double> v;
      for (const CovarianceState& s : cov) v.push_back(obs == "q2" ? s.c_q2 : obs == "qp" ? s.c_qp : s.c_p2);
      return v;
    }
  }
  if (spec.scenario == "linear_norm" && obs == "norm2") return fill([](double) { return 1.0; });
  if (spec.scenario == "hitting" && spec.param("drift_offset", 0.0) == 0.0) {
    const HittingStats h = hitting_stats({spec.param("b", 2.0), spec.param("b0", 0.0), 1.0});
    if (obs == "hit_time") return fill([&](double) { return h.mean_S; });
    if (obs == "upper") return fill([&](double) { return h.p_collapse_2; });
    if (obs == "lower") return fill([&](double) { return h.p_collapse_1; });
  }
  return std::nullopt;
}

}  // namespace

int cmd_ensemble(const Common& c, const EnsembleArgs& a, std::ostream& out) {
  EnsembleSpec spec;
  spec.scenario = a.scenario;
  spec.n_paths = a.n_paths;
  spec.seed = c.seed;
  spec.dt = a.dt;
  spec.horizon = a.horizon;
  spec.record_every = a.record_every;
  spec.observables = a.observables;
  spec.params = parse_params(a.params);
  spec.threads = a.threads;
  const MomentStats st = run_ensemble(spec);

  std::vector<Row> rows;
  Chart chart{fmt::format("Ensemble means, {}", a.scenario), "t", "mean", false, false, {}};
  for (std::size_t o = 0; o < st.observables().size(); ++o) {
    const std::string& name = st.observables()[o];
    const auto oracle = oracle_for(spec, name, st.times());
    double max_z = 0.0;
    for (std::size_t i = 0; i < st.times().size(); ++i) {
      const double mean = st.mean(o, i);
      const double se = st.standard_error(o, i);
      double orc = kNaN, z = kNaN;
      if (oracle) {
        orc = (*oracle)[i];
        if (se > 0.0) z = (mean - orc) / se;
        else if (mean == orc) z = 0.0;
        if (std::isfinite(z)) max_z = std::max(max_z, std::abs(z));
      }
      rows.push_back({name, {st.times()[i], mean, se, orc, z}});
    }
    if (chart.series.size() < 7 && st.times().size() > 1) chart.series.push_back({name, st.times(), st.mean_series(name)});
    if (oracle) fmt::print(out, "{:<10} max |z| against the closed form {:.2f}\n", name, max_z);
  }
  if (!st.variance_defined()) fmt::print(out, "one path: variances and standard errors are undefined\n");
  OutputSet o = outputs(c);
  o.write_text("stats.csv", table_text({"observable", "t", "mean", "stderr", "oracle", "z"}, rows));
  if (!chart.series.empty()) o.write_svg("stats.svg", chart);
  o.write_manifest("ensemble", c.seed, c.config_text);
  fmt::print(out, "{} paths of '{}', {} observables x {} times\n", st.count(), a.scenario, st.observables().size(),
             st.times().size());
  print_files(out, c, o);
  return 0;
}

int cmd_verify(const Common& c, const VerifyArgs& a, std::ostream& out) {
  const std::vector<int> ids = verify::suite_criteria(a.suite);
  verify::Options opt;
  opt.n_paths = a.n_paths;
  opt.seed = c.seed;
  opt.threads = a.threads;
  opt.on_result = [&](const verify::CriterionResult& r) { fmt::print(out, "{}\n", verify::format_line(r)); out.flush(); };
  std::vector<Row> rows;
  int failed = 0;
  for (int id : ids) {
    const verify::CriterionResult r = verify::run_criterion(id, opt);
    failed += !r.pass;
    rows.push_back({std::to_string(r.id), {r.pass ? 1.0 : 0.0}});
  }
  OutputSet o = outputs(c);
  o.write_text("verify.csv", table_text({"criterion", "pass"}, rows));
  o.write_manifest("verify", c.seed, c.config_text);
  fmt::print(out, "{} of {} criteria passed\n", ids.size() - failed, ids.size());
  return failed == 0 ? 0 : verify_failed;
}

}  // namespace qmupl::cli
