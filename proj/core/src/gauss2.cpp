#include "qmupl/gauss2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qmupl/errors.hpp"

namespace qmupl {

namespace {

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

// h / cosh(Gamma^R), the only combination in which h enters.
double overlap_ratio(const CollapseVariables& v) { return std::exp(v.log_h - log_cosh(v.gamma_r)); }

const std::uint64_t kBridgeStreamTag = 0xb5ad4eceda1ce2a9ULL;

}  // namespace

void DoubleGaussianState::validate() const {
  if (!(a.real() > 0.0) || !std::isfinite(a.real()) || !std::isfinite(a.imag())) {
    throw PreconditionError("width parameter needs a positive finite real part");
  }
  for (double v : {x_bar_1, x_bar_2, k_bar_1, k_bar_2, gamma_1.real(), gamma_1.imag(), gamma_2.real(), gamma_2.imag()}) {
    if (!std::isfinite(v)) throw PreconditionError("non-finite double-Gaussian parameter");
  }
}

DoubleGaussianState DoubleGaussianState::symmetric(complex a, double X0, double K0, double gamma_r) {
  DoubleGaussianState s;
  s.a = a;
  s.x_bar_1 = -0.5 * X0;
  s.x_bar_2 = 0.5 * X0;
  s.k_bar_1 = -0.5 * K0;
  s.k_bar_2 = 0.5 * K0;
  s.gamma_1 = complex(-0.5 * gamma_r, 0.0);
  s.gamma_2 = complex(0.5 * gamma_r, 0.0);
  return s;
}

CollapseVariables collapse_variables(const DoubleGaussianState& s) {
  CollapseVariables v;
  const double ar = s.a.real();
  const double ai = s.a.imag();
  v.X = s.X();
  v.K = s.K();
  v.gamma_r = s.Gamma().real();
  v.gamma_i = s.Gamma().imag();
  v.Y = -(2.0 * ai * v.X + v.K) / (2.0 * ar);
  v.theta = 0.5 * (s.x_bar_1 + s.x_bar_2) * v.K + v.gamma_i;
  v.log_h = -0.5 * ar * (v.X * v.X + v.Y * v.Y);
  v.h = std::exp(v.log_h);
  v.delta = v.h * ((s.x_bar_1 + s.x_bar_2) * std::cos(v.theta) + v.Y * std::sin(v.theta));
  return v;
}

double quantum_mean_double(const DoubleGaussianState& s) {
  const CollapseVariables v = collapse_variables(s);
  const double r = overlap_ratio(v);
  const double th = std::tanh(v.gamma_r);
  const double cos_t = std::cos(v.theta);
  const double cross = (s.x_bar_1 + s.x_bar_2) * cos_t + v.Y * std::sin(v.theta);
  const double num = 0.5 * s.x_bar_1 * (1.0 - th) + 0.5 * s.x_bar_2 * (1.0 + th) + 0.5 * r * cross;
  const double den = 1.0 + r * cos_t;
  if (!(den > 0.0)) throw NumericError("double-Gaussian norm vanished");
  return num / den;
}

double log_norm_squared_double(const DoubleGaussianState& s) {
  const CollapseVariables v = collapse_variables(s);
  const double r = overlap_ratio(v);
  const double den = 1.0 + r * std::cos(v.theta);
  if (!(den > 0.0)) throw NumericError("double-Gaussian norm vanished");
  return 0.5 * std::log(std::numbers::pi / (2.0 * s.a.real())) + s.gamma_1.real() + s.gamma_2.real() +
         std::numbers::ln2 + log_cosh(v.gamma_r) + std::log(den);
}

double g_term(const CollapseVariables& v, const Model& model) {
  const double r = overlap_ratio(v);
  if (r == 0.0) return 0.0;
  const double cos_t = std::cos(v.theta);
  return model.lambda * v.X * r * (v.Y * std::sin(v.theta) - v.X * cos_t * std::tanh(v.gamma_r)) / (1.0 + r * cos_t);
}

double g_bound_overlap(const CollapseVariables& v, double a_real, const Model& model) {
  const double s = std::abs(v.X) + std::abs(v.Y);
  const double z = a_real * s * s / 4.0;
  if (z == 0.0) return std::numeric_limits<double>::infinity();
  return model.lambda * s * s / std::expm1(z);
}

double log_c_bound(double a_min, double x_min) {
  if (!(a_min > 0.0) || !(x_min > 0.0)) throw ParameterError("c bound needs positive a_min and x_min");
  const double z = a_min * x_min * x_min / 4.0;
  return -z - std::log(-std::expm1(-z));
}

double c_bound(double a_min, double x_min) { return std::exp(log_c_bound(a_min, x_min)); }

std::array<double, 2> separation_coefficients(complex a, const Model& model) {
  return {model.lambda / a.real(), -2.0 * model.lambda * a.imag() / a.real()};
}

namespace {

struct XK {
  double X, K;
};

XK xk_rhs(const XK& y, complex a, const Model& model) {
  const auto [a1, a2] = separation_coefficients(a, model);
  return {-a1 * y.X + model.hbar_over_m() * y.K, -a2 * y.X};
}

XK xk_rk4(XK y, complex a_left, double t0, double t1, std::size_t n, const Model& model) {
  const double h = (t1 - t0) / static_cast<double>(n);
  complex a0 = a_left;
  for (std::size_t i = 0; i < n; ++i) {
    const complex am = a_exact(0.5 * h, a0, model);
    const complex a1 = a_exact(h, a0, model);
    const XK k1 = xk_rhs(y, a0, model);
    const XK k2 = xk_rhs({y.X + 0.5 * h * k1.X, y.K + 0.5 * h * k1.K}, am, model);
    const XK k3 = xk_rhs({y.X + 0.5 * h * k2.X, y.K + 0.5 * h * k2.K}, am, model);
    const XK k4 = xk_rhs({y.X + h * k3.X, y.K + h * k3.K}, a1, model);
    y.X += h / 6.0 * (k1.X + 2.0 * k2.X + 2.0 * k3.X + k4.X);
    y.K += h / 6.0 * (k1.K + 2.0 * k2.K + 2.0 * k3.K + k4.K);
    a0 = a1;
  }
  return y;
}

}  // namespace

XKState xk_evolve(double X0, double K0, complex a0, const Model& model, double t, std::size_t min_steps) {
  if (!(a0.real() > 0.0)) throw PreconditionError("width parameter needs a positive real part");
  if (!(t >= 0.0)) throw PreconditionError("xk_evolve needs t >= 0");
  if (t == 0.0) return {X0, K0, 0.0};
  const XK y = xk_rk4({X0, K0}, a0, 0.0, t, std::max<std::size_t>(min_steps, 1), model);
  return {y.X, y.K, t};
}

std::vector<XKState> xk_trajectory(double X0, double K0, complex a0, const Model& model,
                                   std::span<const double> times, std::size_t steps_per_interval) {
  if (!(a0.real() > 0.0)) throw PreconditionError("width parameter needs a positive real part");
  std::vector<XKState> out;
  out.reserve(times.size());
  XK y{X0, K0};
  double t_prev = 0.0;
  complex a_prev = a0;
  for (double t : times) {
    if (!(t >= t_prev)) throw PreconditionError("trajectory times must be sorted and non-negative");
    if (t > t_prev) {
      y = xk_rk4(y, a_prev, t_prev, t, std::max<std::size_t>(steps_per_interval, 1), model);
      a_prev = a_exact(t - t_prev, a_prev, model);
      t_prev = t;
    }
    out.push_back({y.X, y.K, t});
  }
  return out;
}

double situation_a_separation(double X0, double t, const Model& model) {
  const double half = 0.5 * model.omega() * t;
  return X0 * std::exp(-half) * (std::cos(half) - std::sin(half));
}

AInfinitySystem a_infinity_system(const Model& model) {
  AInfinitySystem sys;
  sys.matrix = {{{-model.omega(), model.hbar_over_m()}, {-2.0 * model.lambda, 0.0}}};
  const double tr = sys.trace();
  const double det = sys.determinant();
  const complex root = std::sqrt(complex(tr * tr - 4.0 * det, 0.0));
  sys.eigenvalues = {0.5 * (tr + root), 0.5 * (tr - root)};
  return sys;
}

double gamma_full_step(const DoubleGaussianState& s, double dW, double dt, const Model& model) {
  const CollapseVariables v = collapse_variables(s);
  const double drift = model.lambda * v.X * v.X * std::tanh(v.gamma_r) + g_term(v, model);
  return v.gamma_r + drift * dt + std::sqrt(model.lambda) * v.X * dW;
}

DoubleGaussianState step_double(const DoubleGaussianState& s, double dW, double dt, const Model& model) {
  const double q = quantum_mean_double(s);
  const double d_xi = dW + 2.0 * std::sqrt(model.lambda) * q * dt;
  const complex a_next = a_exact(dt, s.a, model);
  const GaussianState p1 = step_linear(s.first(), d_xi, dt, model, a_next);
  const GaussianState p2 = step_linear(s.second(), d_xi, dt, model, a_next);
  DoubleGaussianState out;
  out.a = a_next;
  out.x_bar_1 = p1.x_bar;
  out.k_bar_1 = p1.k_bar;
  out.gamma_1 = p1.gamma;
  out.x_bar_2 = p2.x_bar;
  out.k_bar_2 = p2.k_bar;
  out.gamma_2 = p2.gamma;
  out.t = s.t + dt;
  return out;
}

DoubleRun simulate_double(const DoubleGaussianState& initial, const WienerPath& path, const Model& model) {
  initial.validate();
  DoubleRun run;
  run.samples.reserve(path.steps() + 1);
  DoubleGaussianState s = initial;
  auto sample = [&](double direct) {
    const CollapseVariables v = collapse_variables(s);
    DoubleSample d;
    d.t = s.t;
    d.X = v.X;
    d.gamma_r = v.gamma_r;
    d.mean_q = quantum_mean_double(s);
    d.g = g_term(v, model);
    d.g_bound = g_bound_overlap(v, s.a.real(), model);
    d.gamma_r_direct = direct;
    if (std::abs(d.g) > d.g_bound) ++run.bound_violations;
    run.samples.push_back(d);
  };
  sample(s.Gamma().real());
  for (double dW : path.increments) {
    const double direct = gamma_full_step(s, dW, path.dt, model);
    s = step_double(s, dW, path.dt, model);
    run.max_route_gap = std::max(run.max_route_gap, std::abs(s.Gamma().real() - direct));
    sample(direct);
  }
  run.final_state = s;
  return run;
}

void HittingConfig::validate() const {
  if (!(b > 0.0) || !std::isfinite(b)) throw PreconditionError("threshold b must be positive");
  if (!(std::abs(b0) < b)) throw PreconditionError("initial value must lie strictly inside (-b, b)");
  if (!(eta > 0.0 && eta < b)) throw PreconditionError("eta must lie in (0, b)");
}

double hitting_variance_F(double x) {
  const double th = std::tanh(x);
  return x * x * th * th + x * th - x * x;
}

HittingStats hitting_stats(const HittingConfig& config) {
  config.validate();
  const double b = config.b;
  const double b0 = config.b0;
  const double tb = std::tanh(b);
  const double t0 = std::tanh(b0);
  const double te = std::tanh(config.eta);
  HittingStats st;
  st.mean_S = b * tb - b0 * t0;
  st.var_S = hitting_variance_F(b) - hitting_variance_F(b0);
  st.p_collapse_2 = (tb + t0) / (2.0 * tb);
  st.p_collapse_1 = (tb - t0) / (2.0 * tb);
  st.p_deloc_bound = 1.0 - (1.0 + tb) * te / (1.0 + te);
  return st;
}

BornRule born_rule_check(double gamma_10_r, double gamma_20_r, double b) {
  if (!(b > 0.0)) throw PreconditionError("threshold b must be positive");
  BornRule r;
  const double d = gamma_20_r - gamma_10_r;
  // e^{2 g2} / (e^{2 g1} + e^{2 g2}) = (1 + tanh d) / 2.
  r.norm_ratio = 0.5 * (1.0 + std::tanh(d));
  const double tb = std::tanh(b);
  r.exact = (tb + std::tanh(d)) / (2.0 * tb);
  r.tolerance = 1.0 - tb;
  return r;
}

namespace {

// Probability that a Brownian bridge of variance ds between x0 and x1, both
// on the same side of `level`, touches it.
double bridge_crossing(double x0, double x1, double level, double ds) {
  return std::exp(-2.0 * (level - x0) * (level - x1) / ds);
}

class ReducedStepper {
 public:
  ReducedStepper(double dt_s, std::uint64_t seed, std::uint64_t index, const ReducedOptions& options)
      : ds_(dt_s), sd_(std::sqrt(dt_s)), noise_(seed, index), bridge_(seed ^ kBridgeStreamTag, index),
        options_(options) {}

  double step(double g) { return g + (std::tanh(g) + options_.drift_offset) * ds_ + sd_ * noise_.normal(); }

  // Did the path cross `level` between x0 and x1 (from the side x0 is on)?
  bool crossed(double x0, double x1, double level) {
    if (x0 < level) {
      if (x1 >= level) return true;
    } else if (x0 > level) {
      if (x1 <= level) return true;
    } else {
      return true;
    }
    if (!options_.bridge) return false;
    return bridge_.uniform() < bridge_crossing(x0, x1, level, ds_);
  }

 private:
  double ds_;
  double sd_;
  NormalStream noise_;
  NormalStream bridge_;
  ReducedOptions options_;
};

void check_reduced_args(const HittingConfig& config, double s_max, double dt_s) {
  if (!(std::isfinite(config.b) && config.b > 0.0)) throw PreconditionError("threshold b must be positive");
  if (!(dt_s > 0.0)) throw PreconditionError("dt_s must be positive");
  if (!(s_max >= 0.0)) throw PreconditionError("s_max must be non-negative");
}

HitResult run_to_hit(ReducedStepper& stepper, const HittingConfig& config, double s_max, double dt_s) {
  const double b = config.b;
  double g = config.b0;
  if (g >= b) return {0.0, HitOutcome::upper};
  if (g <= -b) return {0.0, HitOutcome::lower};
  const auto n = static_cast<std::size_t>(std::ceil(s_max / dt_s - 1e-9));
  for (std::size_t i = 1; i <= n; ++i) {
    const double next = stepper.step(g);
    const double s = dt_s * static_cast<double>(i);
    if (next >= b) return {s, HitOutcome::upper};
    if (next <= -b) return {s, HitOutcome::lower};
    if (stepper.crossed(g, next, b)) return {s, HitOutcome::upper};
    if (stepper.crossed(g, next, -b)) return {s, HitOutcome::lower};
    g = next;
  }
  return {s_max, HitOutcome::merged};
}

}  // namespace

HitResult simulate_reduced_gamma(const HittingConfig& config, double s_max, double dt_s, std::uint64_t seed,
                                 std::uint64_t index, const ReducedOptions& options) {
  check_reduced_args(config, s_max, dt_s);
  ReducedStepper stepper(dt_s, seed, index, options);
  return run_to_hit(stepper, config, s_max, dt_s);
}

DelocalizationResult simulate_delocalization(const HittingConfig& config, double s_max, double s_after, double dt_s,
                                             std::uint64_t seed, std::uint64_t index, const ReducedOptions& options) {
  config.validate();
  check_reduced_args(config, s_max, dt_s);
  ReducedStepper stepper(dt_s, seed, index, options);
  DelocalizationResult out;
  out.hit = run_to_hit(stepper, config, s_max, dt_s);
  if (out.hit.censored()) return out;
  const double sign = static_cast<double>(out.hit.sign());
  const double level = sign * (config.b - config.eta);
  double g = sign * config.b;
  const auto n = static_cast<std::size_t>(std::ceil(s_after / dt_s - 1e-9));
  for (std::size_t i = 0; i < n; ++i) {
    const double next = stepper.step(g);
    if (stepper.crossed(g, next, level)) {
      out.dipped = true;
      break;
    }
    g = next;
  }
  return out;
}

SandwichReport bounding_sandwich(double c, const HittingConfig& config, double s_max, double dt_s,
                                 std::uint64_t seed, std::size_t n_paths) {
  if (!(c >= 0.0)) throw PreconditionError("c must be non-negative");
  check_reduced_args(config, s_max, dt_s);
  SandwichReport rep;
  rep.paths = n_paths;
  const auto n = static_cast<std::size_t>(std::ceil(s_max / dt_s - 1e-9));
  const double sd = std::sqrt(dt_s);
  const double b = config.b;
  double sum_minus = 0.0;
  double sum_mid = 0.0;
  double sum_plus = 0.0;
  constexpr double kNever = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n_paths; ++p) {
    NormalStream noise(seed, p);
    double gm = config.b0;
    double g = config.b0;
    double gp = config.b0;
    double tm = kNever;
    double t = kNever;
    double tp = kNever;
    for (std::size_t i = 1; i <= n; ++i) {
      const double dW = sd * noise.normal();
      gm = gm + (std::tanh(gm) - c) * dt_s + dW;
      g = g + std::tanh(g) * dt_s + dW;
      gp = gp + (std::tanh(gp) + c) * dt_s + dW;
      ++rep.steps_checked;
      const double viol = std::max(gm - g, g - gp);
      if (viol > 0.0) {
        ++rep.violations;
        rep.max_violation = std::max(rep.max_violation, viol);
      }
      const double s = dt_s * static_cast<double>(i);
      if (tm == kNever && gm >= b) tm = s;
      if (t == kNever && g >= b) t = s;
      if (tp == kNever && gp >= b) tp = s;
    }
    if (tm != kNever) {
      ++rep.passage_paths;
      sum_minus += tm;
      sum_mid += t;
      sum_plus += tp;
    }
    if (!(tp <= t && t <= tm)) ++rep.passage_order_violations;
  }
  if (rep.passage_paths > 0) {
    const double k = static_cast<double>(rep.passage_paths);
    rep.mean_upper_passage_minus = sum_minus / k;
    rep.mean_upper_passage_mid = sum_mid / k;
    rep.mean_upper_passage_plus = sum_plus / k;
  }
  return rep;
}

FullSandwichReport full_sandwich(const DoubleGaussianState& initial, double a_min, double x_min, double horizon,
                                 double dt, const Model& model, std::uint64_t seed, std::size_t n_paths) {
  initial.validate();
  if (!(dt > 0.0) || !(horizon >= dt)) throw PreconditionError("need 0 < dt <= horizon");
  const double c = c_bound(a_min, x_min);
  const double threshold = a_min * x_min * x_min;
  const double sl = std::sqrt(model.lambda);
  FullSandwichReport rep;
  rep.paths = n_paths;
  for (std::size_t p = 0; p < n_paths; ++p) {
    const WienerPath path = sample_path(horizon, dt, seed, p);
    DoubleGaussianState s = initial;
    double gm = s.Gamma().real();
    double gp = gm;
    for (double dW : path.increments) {
      const CollapseVariables v = collapse_variables(s);
      if (s.a.real() < a_min || s.a.real() * v.X * v.X < threshold) break;
      const double lx2 = model.lambda * v.X * v.X;
      if (std::abs(g_term(v, model)) > c * lx2) ++rep.bound_failures;
      gm = gm + lx2 * (std::tanh(gm) - c) * dt + sl * v.X * dW;
      gp = gp + lx2 * (std::tanh(gp) + c) * dt + sl * v.X * dW;
      s = step_double(s, dW, dt, model);
      const double g = s.Gamma().real();
      ++rep.steps_checked;
      // Tolerance covers the rounding difference between the per-packet
      // update and the closed Gamma^R step.
      const double tol = 1e-9 * (1.0 + std::abs(g));
      const double viol = std::max(gm - g, g - gp);
      if (viol > tol) {
        ++rep.violations;
        rep.max_violation = std::max(rep.max_violation, viol);
      }
    }
  }
  return rep;
}

}  // namespace qmupl
