#include "qmupl/scenarios.hpp"

#include <cmath>

#include "qmupl/errors.hpp"
#include "qmupl/gauss1.hpp"
#include "qmupl/gauss2.hpp"
#include "qmupl/grid.hpp"
#include "qmupl/stochastic.hpp"

namespace qmupl {

Model scenario_model(const EnsembleSpec& spec) {
  Model m;
  m.hbar = spec.param("hbar", m.hbar);
  m.mass = spec.param("mass", m.mass);
  m.lambda = spec.param("lambda", m.lambda);
  if (!(m.hbar > 0.0) || !(m.mass > 0.0) || !(m.lambda >= 0.0)) {
    throw ParameterError("scenario needs hbar > 0, mass > 0, lambda >= 0");
  }
  return m;
}

namespace {

std::vector<std::string> with_model_keys(std::vector<std::string> keys) {
  keys.insert(keys.end(), {"hbar", "mass", "lambda"});
  return keys;
}

std::size_t slot(std::size_t observable, std::size_t time, std::size_t n_times) {
  return observable * n_times + time;
}

// Index of the recorded time point reached after `step` steps, or npos.
std::size_t record_slot(const EnsembleSpec& spec, std::size_t step, std::size_t total) {
  if (step % spec.record_every == 0) return step / spec.record_every;
  if (step == total) return step / spec.record_every + 1;
  return static_cast<std::size_t>(-1);
}

class SingleScenario : public Scenario {
 public:
  explicit SingleScenario(bool stationary) : stationary_(stationary) {}

  std::vector<std::string> observables(const EnsembleSpec&) const override {
    return {"q", "p", "q2", "qp", "p2", "energy", "sigma_q"};
  }
  std::vector<std::string> parameter_keys() const override {
    return stationary_ ? with_model_keys({"x0", "k0"}) : with_model_keys({"a0_re", "a0_im", "x0", "k0"});
  }

  void run_path(const EnsembleSpec& spec, std::uint64_t index, std::span<double> out) const override {
    const Model model = scenario_model(spec);
    GaussianState s;
    s.a = stationary_ ? model.a_inf() : complex(spec.param("a0_re", 0.5), spec.param("a0_im", 0.0));
    s.x_bar = spec.param("x0", 0.0);
    s.k_bar = spec.param("k0", 0.0);
    s.validate();
    const WienerPath path = sample_path(spec.horizon, spec.dt, spec.seed, index);
    const std::size_t total = path.steps();
    const std::size_t nt = times(spec).size();
    auto record = [&](std::size_t i) {
      const double p = model.hbar * s.k_bar;
      const double vals[] = {s.x_bar, p, s.x_bar * s.x_bar, s.x_bar * p, p * p, packet_energy(s, model),
                             spreads_of(s.a, model).sigma_q};
      for (std::size_t o = 0; o < 7; ++o) out[slot(o, i, nt)] = vals[o];
    };
    record(0);
    for (std::size_t k = 0; k < total; ++k) {
      s = step_means(s, path.increments[k], path.dt, model);
      const std::size_t r = record_slot(spec, k + 1, total);
      if (r != static_cast<std::size_t>(-1)) record(r);
    }
  }

 private:
  bool stationary_;
};

class LinearNormScenario : public Scenario {
 public:
  std::vector<std::string> observables(const EnsembleSpec&) const override { return {"norm2", "q"}; }
  std::vector<std::string> parameter_keys() const override {
    return with_model_keys({"a0_re", "a0_im", "x0", "k0"});
  }

  void run_path(const EnsembleSpec& spec, std::uint64_t index, std::span<double> out) const override {
    const Model model = scenario_model(spec);
    GaussianState s;
    s.a = complex(spec.param("a0_re", 0.5), spec.param("a0_im", 0.0));
    s.x_bar = spec.param("x0", 0.0);
    s.k_bar = spec.param("k0", 0.0);
    s.validate();
    // Start from unit norm.
    s.gamma = complex(-0.5 * s.log_norm_squared(), 0.0);
    const WienerPath xi = sample_path(spec.horizon, spec.dt, spec.seed, index);
    const std::size_t total = xi.steps();
    const std::size_t nt = times(spec).size();
    auto record = [&](std::size_t i) {
      out[slot(0, i, nt)] = s.norm_squared();
      out[slot(1, i, nt)] = s.x_bar;
    };
    record(0);
    for (std::size_t k = 0; k < total; ++k) {
      s = step_linear(s, xi.increments[k], xi.dt, model, a_exact(xi.dt, s.a, model));
      const std::size_t r = record_slot(spec, k + 1, total);
      if (r != static_cast<std::size_t>(-1)) record(r);
    }
  }
};

HittingConfig hitting_config(const EnsembleSpec& spec) {
  HittingConfig c;
  c.b = spec.param("b", 2.0);
  c.b0 = spec.param("b0", 0.0);
  c.eta = spec.param("eta", 1.0);
  return c;
}

ReducedOptions reduced_options(const EnsembleSpec& spec) {
  ReducedOptions o;
  o.bridge = spec.param("bridge", 1.0) != 0.0;
  o.drift_offset = spec.param("drift_offset", 0.0);
  return o;
}

class HittingScenario : public Scenario {
 public:
  std::vector<std::string> observables(const EnsembleSpec&) const override {
    return {"hit_time", "upper", "lower", "merged"};
  }
  std::vector<double> times(const EnsembleSpec&) const override { return {0.0}; }
  std::vector<std::string> parameter_keys() const override { return {"b", "b0", "bridge", "drift_offset"}; }

  void run_path(const EnsembleSpec& spec, std::uint64_t index, std::span<double> out) const override {
    const HitResult r =
        simulate_reduced_gamma(hitting_config(spec), spec.horizon, spec.dt, spec.seed, index, reduced_options(spec));
    out[0] = r.hit_time;
    out[1] = r.outcome == HitOutcome::upper ? 1.0 : 0.0;
    out[2] = r.outcome == HitOutcome::lower ? 1.0 : 0.0;
    out[3] = r.censored() ? 1.0 : 0.0;
  }
};

class DelocalizationScenario : public Scenario {
 public:
  std::vector<std::string> observables(const EnsembleSpec&) const override { return {"dipped", "merged", "upper"}; }
  std::vector<double> times(const EnsembleSpec&) const override { return {0.0}; }
  std::vector<std::string> parameter_keys() const override { return {"b", "b0", "eta", "s_after", "bridge"}; }

  void run_path(const EnsembleSpec& spec, std::uint64_t index, std::span<double> out) const override {
    const DelocalizationResult r =
        simulate_delocalization(hitting_config(spec), spec.horizon, spec.param("s_after", 20.0), spec.dt, spec.seed,
                                index, reduced_options(spec));
    out[0] = r.dipped ? 1.0 : 0.0;
    out[1] = r.hit.censored() ? 1.0 : 0.0;
    out[2] = r.hit.outcome == HitOutcome::upper ? 1.0 : 0.0;
  }
};

DoubleGaussianState double_initial(const EnsembleSpec& spec, const Model& model) {
  const complex a0 = complex(spec.param("a0_re", model.lambda > 0.0 ? model.a_inf().real() : 0.25),
                             spec.param("a0_im", model.lambda > 0.0 ? model.a_inf().imag() : 0.0));
  return DoubleGaussianState::symmetric(a0, spec.param("X0", 6.0), spec.param("K0", 0.0), spec.param("gamma0", 0.0));
}

class DoubleGammaScenario : public Scenario {
 public:
  std::vector<std::string> observables(const EnsembleSpec&) const override { return {"gamma_r", "X", "mean_q", "g"}; }
  std::vector<std::string> parameter_keys() const override {
    return with_model_keys({"X0", "K0", "a0_re", "a0_im", "gamma0"});
  }

  void run_path(const EnsembleSpec& spec, std::uint64_t index, std::span<double> out) const override {
    const Model model = scenario_model(spec);
    const WienerPath path = sample_path(spec.horizon, spec.dt, spec.seed, index);
    const DoubleRun run = simulate_double(double_initial(spec, model), path, model);
    const std::size_t nt = times(spec).size();
    const std::size_t total = path.steps();
    for (std::size_t k = 0; k <= total; ++k) {
      const std::size_t r = record_slot(spec, k, total);
      if (r == static_cast<std::size_t>(-1)) continue;
      const DoubleSample& d = run.samples[k];
      out[slot(0, r, nt)] = d.gamma_r;
      out[slot(1, r, nt)] = d.X;
      out[slot(2, r, nt)] = d.mean_q;
      out[slot(3, r, nt)] = d.g;
    }
  }
};

class GridDeltaAScenario : public Scenario {
 public:
  std::vector<std::string> observables(const EnsembleSpec&) const override {
    return {"delta_A", "mean_q", "var_q"};
  }
  std::vector<std::string> parameter_keys() const override {
    return with_model_keys({"X0", "K0", "n_points", "extent", "a0_re", "a0_im", "gamma0"});
  }

  void run_path(const EnsembleSpec& spec, std::uint64_t index, std::span<double> out) const override {
    const Model model = scenario_model(spec);
    const auto n = static_cast<std::size_t>(spec.param("n_points", 1024));
    const double extent = spec.param("extent", 80.0);
    const WaveGrid psi0 = double_gaussian_wave(n, extent, double_initial(spec, model));
    const WienerPath path = sample_path(spec.horizon, spec.dt, spec.seed, index);
    const std::size_t nt = times(spec).size();
    const std::size_t total = path.steps();
    GridRunOptions opt;
    opt.record_every = spec.record_every;
    opt.observer = [&](const WaveGrid& g, std::size_t step) {
      const std::size_t r = record_slot(spec, step, total);
      const GridMoments m = grid_moments(g, model);
      const double mw = model.mass * model.omega();
      out[slot(0, r, nt)] = m.var_q + 2.0 * m.var_p / (mw * mw) - 2.0 * m.sigma_qp / mw - model.hbar / mw;
      out[slot(1, r, nt)] = m.mean_q;
      out[slot(2, r, nt)] = m.var_q;
    };
    evolve_nonlinear(psi0, model, path, opt);
  }
};

class GridDensityScenario : public Scenario {
 public:
  std::vector<std::string> observables(const EnsembleSpec& spec) const override {
    const auto n = static_cast<std::size_t>(spec.param("n_points", 512));
    std::vector<std::string> names(n);
    for (std::size_t j = 0; j < n; ++j) names[j] = "p" + std::to_string(j);
    return names;
  }
  std::vector<double> times(const EnsembleSpec& spec) const override {
    return {spec.dt * static_cast<double>(spec.steps())};
  }
  std::vector<std::string> parameter_keys() const override {
    return with_model_keys({"n_points", "extent", "a0_re", "a0_im", "x0", "k0"});
  }

  void run_path(const EnsembleSpec& spec, std::uint64_t index, std::span<double> out) const override {
    const Model model = scenario_model(spec);
    const auto n = static_cast<std::size_t>(spec.param("n_points", 512));
    const double extent = spec.param("extent", 48.0);
    GaussianState s;
    s.a = complex(spec.param("a0_re", 1.0 / 16.0), spec.param("a0_im", 0.0));
    s.x_bar = spec.param("x0", 0.0);
    s.k_bar = spec.param("k0", 0.0);
    const WaveGrid psi0 = gaussian_wave(n, extent, s);
    const WienerPath path = sample_path(spec.horizon, spec.dt, spec.seed, index);
    const NonlinearRun run = evolve_nonlinear(psi0, model, path);
    for (std::size_t j = 0; j < n; ++j) out[j] = std::norm(run.final.psi[j]);
  }
};

}  // namespace

void register_builtin_scenarios(ScenarioRegistry& registry) {
  registry.add("single", std::make_shared<SingleScenario>(false));
  registry.add("stationary", std::make_shared<SingleScenario>(true));
  registry.add("linear_norm", std::make_shared<LinearNormScenario>());
  registry.add("hitting", std::make_shared<HittingScenario>());
  registry.add("delocalization", std::make_shared<DelocalizationScenario>());
  registry.add("double_gamma", std::make_shared<DoubleGammaScenario>());
  registry.add("grid_delta_a", std::make_shared<GridDeltaAScenario>());
  registry.add("grid_density", std::make_shared<GridDensityScenario>());
}

const ScenarioRegistry& default_registry() {
  static const ScenarioRegistry registry = [] {
    ScenarioRegistry r;
    register_builtin_scenarios(r);
    return r;
  }();
  return registry;
}

}  // namespace qmupl
