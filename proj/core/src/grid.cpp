#include "qmupl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "qmupl/errors.hpp"

namespace qmupl {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

const Fft& cached_fft(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<Fft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fft>(n);
  return *slot;
}

void require_same_grid(const WaveGrid& a, const WaveGrid& b) {
  if (a.n_points != b.n_points || a.extent != b.extent) throw ParameterError("grids differ");
}

}  // namespace

WaveGrid::WaveGrid(std::size_t n, double length) : n_points(n), extent(length), psi(n) {
  if (!is_power_of_two(n) || n < 16) throw ParameterError("grid size must be a power of two >= 16");
  if (!(length > 0.0) || !std::isfinite(length)) throw ParameterError("grid extent must be positive");
}

std::vector<double> WaveGrid::positions() const {
  std::vector<double> xs(n_points);
  for (std::size_t j = 0; j < n_points; ++j) xs[j] = x(j);
  return xs;
}

std::vector<double> WaveGrid::density() const {
  std::vector<double> d(n_points);
  for (std::size_t j = 0; j < n_points; ++j) d[j] = std::norm(psi[j]);
  return d;
}

double norm_squared(const WaveGrid& g) {
  double s = 0.0;
  for (const complex& v : g.psi) s += std::norm(v);
  return s * g.dx();
}

double normalize(WaveGrid& g) {
  const double n2 = norm_squared(g);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw NumericError("wavefunction norm is zero or not finite");
  const double f = 1.0 / std::sqrt(n2);
  for (complex& v : g.psi) v *= f;
  return n2;
}

WaveGrid gaussian_wave(std::size_t n, double length, const GaussianState& s) {
  s.validate();
  WaveGrid g(n, length);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.x(j);
    const double d = x - s.x_bar;
    g.psi[j] = std::exp(-s.a * d * d + complex(0.0, s.k_bar * x));
  }
  normalize(g);
  return g;
}

WaveGrid double_gaussian_wave(std::size_t n, double length, const DoubleGaussianState& s) {
  s.validate();
  WaveGrid g(n, length);
  const double shift = std::max(s.gamma_1.real(), s.gamma_2.real());
  const complex g1 = s.gamma_1 - shift;
  const complex g2 = s.gamma_2 - shift;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.x(j);
    const double d1 = x - s.x_bar_1;
    const double d2 = x - s.x_bar_2;
    g.psi[j] = std::exp(-s.a * d1 * d1 + complex(0.0, s.k_bar_1 * x) + g1) +
               std::exp(-s.a * d2 * d2 + complex(0.0, s.k_bar_2 * x) + g2);
  }
  normalize(g);
  return g;
}

void check_containment(const WaveGrid& g) {
  const std::size_t band = std::max<std::size_t>(g.n_points / 64, 1);
  double peak = 0.0;
  for (const complex& v : g.psi) peak = std::max(peak, std::abs(v));
  double edge = 0.0;
  for (std::size_t j = 0; j < band; ++j) {
    edge = std::max(edge, std::abs(g.psi[j]));
    edge = std::max(edge, std::abs(g.psi[g.n_points - 1 - j]));
  }
  if (!(edge < 1e-8 * peak)) {
    throw ContainmentError("wavefunction reaches the domain edge at t = " + std::to_string(g.t) +
                           " (edge/peak = " + std::to_string(peak > 0.0 ? edge / peak : 1.0) +
                           "); enlarge the domain");
  }
}

double l2_distance(const WaveGrid& a, const WaveGrid& b) {
  require_same_grid(a, b);
  complex overlap(0.0, 0.0);
  for (std::size_t j = 0; j < a.n_points; ++j) overlap += std::conj(a.psi[j]) * b.psi[j];
  overlap *= a.dx();
  const double na = norm_squared(a);
  const double nb = norm_squared(b);
  const double c = std::abs(overlap) / std::sqrt(na * nb);
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * c));
}

double grid_mean_q(const WaveGrid& g) {
  double w = 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j < g.n_points; ++j) {
    const double p = std::norm(g.psi[j]);
    w += p;
    s += p * g.x(j);
  }
  return s / w;
}

GridMoments grid_moments(const WaveGrid& g, const Model& model) {
  GridMoments m;
  const std::size_t n = g.n_points;
  double w = 0.0;
  double s1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = std::norm(g.psi[j]);
    w += p;
    s1 += p * g.x(j);
  }
  m.mean_q = s1 / w;
  double s2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = g.x(j) - m.mean_q;
    s2 += std::norm(g.psi[j]) * d * d;
  }
  m.var_q = s2 / w;

  const Fft& fft = cached_fft(n);
  std::vector<complex> spec = g.psi;
  fft.forward(spec);
  const std::vector<double> k = fft_wavenumbers(n, g.extent);
  double wk = 0.0;
  double k1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = std::norm(spec[j]);
    wk += p;
    k1 += p * k[j];
  }
  const double mean_k = k1 / wk;
  double k2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = k[j] - mean_k;
    k2 += std::norm(spec[j]) * d * d;
  }
  m.mean_p = model.hbar * mean_k;
  m.var_p = model.hbar * model.hbar * k2 / wk;

  for (std::size_t j = 0; j < n; ++j) spec[j] *= (k[j] - mean_k) / static_cast<double>(n);
  fft.backward(spec);
  double cross = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cross += (std::conj((g.x(j) - m.mean_q) * g.psi[j]) * spec[j]).real();
  }
  m.sigma_qp = model.hbar * cross / w;
  return m;
}

namespace {

DeltaADiagnostic assemble_delta_A(double dq, double dp, double sqp, const Model& model) {
  const double mw = model.mass * model.omega();
  return {dq, dp, sqp, dq + 2.0 * dp / (mw * mw) - 2.0 * sqp / mw - model.hbar / mw};
}

}  // namespace

DeltaADiagnostic delta_A(const WaveGrid& g, const Model& model) {
  const GridMoments m = grid_moments(g, model);
  return assemble_delta_A(m.var_q, m.var_p, m.sigma_qp, model);
}

DeltaADiagnostic delta_A_gaussian(complex a, const Model& model) {
  const double ar = a.real();
  return assemble_delta_A(1.0 / (4.0 * ar), model.hbar * model.hbar * std::norm(a) / ar,
                          -model.hbar * a.imag() / (2.0 * ar), model);
}

double interval_probability(const WaveGrid& g, double lo, double hi) {
  return interval_probability(g.positions(), g.density(), lo, hi);
}

double interval_probability(const std::vector<double>& x, const std::vector<double>& density, double lo, double hi) {
  if (x.size() < 2 || x.size() != density.size()) throw ParameterError("density and positions must align");
  const double dx = x[1] - x[0];
  if (!(lo <= hi) || lo < x.front() - 1e-12 * std::abs(dx) || hi > x.back() + dx * (1.0 + 1e-12)) {
    throw ParameterError("interval lies outside the domain");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] >= lo && x[j] <= hi) s += density[j];
  }
  return s * dx;
}

GridPropagator::GridPropagator(std::size_t n, double length, const Model& model, double dt)
    : fft_(n), model_(model), dt_(dt), half_phase_(n), full_phase_(n), x_(n) {
  if (!is_power_of_two(n) || n < 16) throw ParameterError("grid size must be a power of two >= 16");
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  const std::vector<double> k = fft_wavenumbers(n, length);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double e = model.hbar_over_m() * k[j] * k[j] * dt / 2.0;
    half_phase_[j] = std::polar(inv_n, -0.5 * e);
    full_phase_[j] = std::polar(inv_n, -e);
  }
  const double dx = length / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) x_[j] = -0.5 * length + static_cast<double>(j) * dx;
}

void GridPropagator::kinetic(WaveGrid& g, double fraction) const {
  fft_.forward(g.psi);
  if (fraction == 0.5) {
    for (std::size_t j = 0; j < g.psi.size(); ++j) g.psi[j] *= half_phase_[j];
  } else if (fraction == 1.0) {
    for (std::size_t j = 0; j < g.psi.size(); ++j) g.psi[j] *= full_phase_[j];
  } else {
    const std::vector<double> k = fft_wavenumbers(g.n_points, g.extent);
    const double inv_n = 1.0 / static_cast<double>(g.n_points);
    for (std::size_t j = 0; j < g.psi.size(); ++j) {
      g.psi[j] *= std::polar(inv_n, -model_.hbar_over_m() * k[j] * k[j] * fraction * dt_ / 2.0);
    }
  }
  fft_.backward(g.psi);
}

double GridPropagator::collapse_nonlinear(WaveGrid& g, double dW) const {
  const double q = grid_mean_q(g);
  const double sl = std::sqrt(model_.lambda);
  for (std::size_t j = 0; j < g.psi.size(); ++j) {
    const double d = x_[j] - q;
    g.psi[j] *= std::exp(sl * d * dW - model_.lambda * d * d * dt_);
  }
  return q;
}

double GridPropagator::collapse_linear(WaveGrid& g, double d_xi) const {
  const double q = grid_mean_q(g);
  const double sl = std::sqrt(model_.lambda);
  for (std::size_t j = 0; j < g.psi.size(); ++j) {
    const double x = x_[j];
    g.psi[j] *= std::exp(sl * x * d_xi - model_.lambda * x * x * dt_);
  }
  return q;
}

namespace {

// Shared driver: `collapse` applies the multiplicative factor of step i and
// returns the squared norm afterwards (the state is renormalized by it).
template <class Collapse>
WaveGrid run_split_step(const WaveGrid& psi0, const GridPropagator& prop, std::size_t steps,
                        const GridRunOptions& options, Collapse&& collapse) {
  WaveGrid g = psi0;
  normalize(g);
  check_containment(g);
  const std::size_t every = options.record_every;
  auto is_record = [&](std::size_t step) { return every != 0 && step % every == 0; };
  if (options.observer) options.observer(g, 0);
  if (steps == 0) return g;
  const double t0 = g.t;
  prop.kinetic(g, 0.5);
  for (std::size_t i = 0; i < steps; ++i) {
    collapse(g, i);
    const std::size_t done = i + 1;
    g.t = t0 + prop.dt() * static_cast<double>(done);
    const bool last = done == steps;
    const bool record = last || is_record(done);
    if (record) {
      prop.kinetic(g, 0.5);
      check_containment(g);
      if (options.observer) options.observer(g, done);
      if (!last) prop.kinetic(g, 0.5);
    } else {
      prop.kinetic(g, 1.0);
      if (options.containment_every != 0 && done % options.containment_every == 0) check_containment(g);
    }
  }
  return g;
}

}  // namespace

NonlinearRun evolve_nonlinear(const WaveGrid& psi0, const Model& model, const WienerPath& path,
                              const GridRunOptions& options) {
  GridPropagator prop(psi0.n_points, psi0.extent, model, path.dt);
  NonlinearRun run;
  run.mean_history.reserve(path.steps());
  run.final = run_split_step(psi0, prop, path.steps(), options, [&](WaveGrid& g, std::size_t i) {
    run.mean_history.push_back(prop.collapse_nonlinear(g, path.increments[i]));
    const double n2 = normalize(g);
    run.max_norm_drift = std::max(run.max_norm_drift, std::abs(1.0 - n2));
  });
  return run;
}

LinearRun evolve_linear_then_normalize(const WaveGrid& psi0, const Model& model, const WienerPath& xi,
                                       const GridRunOptions& options) {
  GridPropagator prop(psi0.n_points, psi0.extent, model, xi.dt);
  LinearRun run;
  run.log_norm.reserve(xi.steps());
  run.mean_history.reserve(xi.steps());
  double log_norm = std::log(norm_squared(psi0));
  run.final = run_split_step(psi0, prop, xi.steps(), options, [&](WaveGrid& g, std::size_t i) {
    run.mean_history.push_back(prop.collapse_linear(g, xi.increments[i]));
    log_norm += std::log(normalize(g));
    if (!std::isfinite(log_norm)) throw NumericError("linear-equation norm left the representable range");
    run.log_norm.push_back(log_norm);
  });
  run.physical_noise = girsanov_shift(xi, run.mean_history, model.lambda);
  return run;
}

CollapseConvergence collapse_convergence_report(std::vector<double> t, std::vector<double> mean,
                                                std::vector<double> stderr_values, std::size_t n_paths) {
  if (n_paths < 500) throw PreconditionError("collapse convergence needs at least 500 paths");
  if (t.size() != mean.size() || t.size() != stderr_values.size() || t.size() < 2) {
    throw ParameterError("series must be aligned and have at least two points");
  }
  CollapseConvergence rep;
  rep.non_increasing = true;
  for (std::size_t j = 1; j < mean.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double band = 2.0 * std::hypot(stderr_values[i], stderr_values[j]);
      const double rise = mean[j] - mean[i];
      const double in_se = band > 0.0 ? rise / (0.5 * band) : (rise > 0.0 ? INFINITY : 0.0);
      if (in_se > rep.worst_rise) {
        rep.worst_rise = in_se;
        rep.worst_index = j;
      }
      if (rise > band) rep.non_increasing = false;
    }
  }
  rep.terminal_ratio = mean.front() != 0.0 ? mean.back() / mean.front() : 0.0;
  const std::size_t start = mean.size() / 2;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t k = 0;
  for (std::size_t i = start; i < mean.size(); ++i) {
    if (!(mean[i] > 0.0)) continue;
    const double y = -std::log(mean[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
    ++k;
  }
  if (k >= 2) {
    const double kk = static_cast<double>(k);
    const double den = kk * stt - st * st;
    if (den > 0.0) rep.late_decay_rate = (kk * sty - st * sy) / den;
  }
  rep.t = std::move(t);
  rep.mean = std::move(mean);
  rep.stderr_ = std::move(stderr_values);
  return rep;
}

}  // namespace qmupl
