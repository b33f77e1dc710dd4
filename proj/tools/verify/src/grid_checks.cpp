#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "checks.hpp"
#include "qmupl/ensemble.hpp"
#include "qmupl/grid.hpp"
#include "qmupl/master.hpp"

namespace qmupl::verify {

namespace {

// Largest distance between the grid solution and the Gaussian parameter
// solution driven by the same increments, sampled every `every` steps.
double shared_noise_distance(const GaussianState& s0, const WienerPath& path, std::size_t n, double length,
                             std::size_t every, const Model& m) {
  std::vector<GaussianState> ref;
  GaussianState s = s0;
  ref.push_back(s);
  for (std::size_t k = 0; k < path.steps(); ++k) {
    s = step_means(s, path.increments[k], path.dt, m);
    if ((k + 1) % every == 0 || k + 1 == path.steps()) ref.push_back(s);
  }
  double worst = 0.0;
  std::size_t next = 0;
  GridRunOptions opt;
  opt.record_every = every;
  opt.observer = [&](const WaveGrid& g, std::size_t) {
    worst = std::max(worst, l2_distance(g, gaussian_wave(n, length, ref.at(next++))));
  };
  evolve_nonlinear(gaussian_wave(n, length, s0), m, path, opt);
  return worst;
}

}  // namespace

CriterionResult grid_vs_gaussian(const Options& o) {
  Check c;
  const Model m;
  GaussianState s0;
  s0.a = complex(0.5, 0.0);
  const std::size_t n = 1024;
  const double length = 40.0;
  const WienerPath fine = sample_path(5.0, 5e-5, o.seed, 0);
  const WienerPath coarse = fine.coarsen(2);
  const double d_coarse = shared_noise_distance(s0, coarse, n, length, 1000, m);
  const double d_fine = shared_noise_distance(s0, fine, n, length, 2000, m);
  c.require(d_coarse < 1e-3, fmt::format("max L2 distance {:.3e} at dt=1e-4", d_coarse));
  c.require(d_fine < d_coarse, fmt::format("{:.3e} at dt=5e-5", d_fine));
  return finish(9, "grid vs Gaussian parameters", c);
}

CriterionResult collapse_diagnostic(const Options& o) {
  Check c;
  EnsembleSpec spec;
  spec.scenario = "grid_delta_a";
  spec.n_paths = 500;
  spec.seed = o.seed + 11;
  spec.dt = 1e-3;
  spec.horizon = 5.0;
  spec.record_every = 250;
  spec.threads = o.threads;
  spec.params = {{"X0", 6.0}, {"n_points", 1024}, {"extent", 80.0}};
  spec.observables = {"delta_A"};
  const MomentStats st = run_ensemble(spec);
  const CollapseConvergence rep =
      collapse_convergence_report(st.times(), st.mean_series("delta_A"), st.stderr_series("delta_A"), st.count());
  c.require(rep.non_increasing, fmt::format("non-increasing within 2 SE (worst rise {:.2f} SE at t={:.2f})",
                                            rep.worst_rise, rep.t[rep.worst_index]));
  c.require(rep.terminal_ratio < 0.1,
            fmt::format("E[dA] {:.4f} -> {:.3e}, ratio {:.2e}", rep.mean.front(), rep.mean.back(), rep.terminal_ratio));
  return finish(10, "collapse diagnostic", c);
}

CriterionResult unraveling_consistency(const Options& o) {
  Check c;
  const Model m;
  const std::size_t n = 512;
  const double length = 32.0;
  const double t = 1.0;
  EnsembleSpec spec;
  spec.scenario = "grid_density";
  spec.n_paths = 2000;
  spec.seed = o.seed + 12;
  spec.dt = 1e-3;
  spec.horizon = t;
  spec.record_every = 1000;
  spec.threads = o.threads;
  spec.params = {{"n_points", double(n)}, {"extent", length}, {"a0_re", 1.0}, {"a0_im", 0.0}};
  const MomentStats st = run_ensemble(spec);
  const std::size_t last = st.times().size() - 1;
  std::vector<double> mc(n);
  for (std::size_t j = 0; j < n; ++j) mc[j] = st.mean(j, last);

  GaussianState s0;
  s0.a = complex(1.0, 0.0);
  const std::vector<double> x = WaveGrid(n, length).positions();
  const DensityProfile ps = pure_schrodinger_density(s0, x, t, m);
  const DensityProfile master = density_convolve(ps, t, m);
  const double dx = length / n;
  const double d = l1_distance(mc, master.p, dx);
  c.require(d < 0.02, fmt::format("L1(grid ensemble, master) {:.4f}; L1(master, pure Schrodinger) {:.4f}", d,
                                  l1_distance(master.p, ps.p, dx)));
  return finish(11, "unraveling consistency", c);
}

}  // namespace qmupl::verify
