#include "qmupl/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmupl/errors.hpp"

namespace qmupl {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

NormalStream::NormalStream(std::uint64_t master_seed, std::uint64_t index)
    : engine_(substream_seed(master_seed, index)) {}

std::vector<double> WienerPath::cumulative() const {
  std::vector<double> w(increments.size() + 1, 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i) w[i + 1] = w[i] + increments[i];
  return w;
}

WienerPath WienerPath::coarsen(std::size_t factor) const {
  if (factor == 0 || increments.size() % factor != 0) {
    throw ParameterError("coarsening factor must divide the number of steps");
  }
  WienerPath out{dt * static_cast<double>(factor), {}, seed, index};
  out.increments.reserve(increments.size() / factor);
  for (std::size_t i = 0; i < increments.size(); i += factor) {
    double sum = 0.0;
    for (std::size_t j = 0; j < factor; ++j) sum += increments[i + j];
    out.increments.push_back(sum);
  }
  return out;
}

WienerPath sample_path(double horizon, double dt, std::uint64_t seed, std::uint64_t index) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw ParameterError("horizon must be at least dt");
  const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
  WienerPath path{dt, std::vector<double>(n), seed, index};
  NormalStream stream(seed, index);
  const double sd = std::sqrt(dt);
  for (auto& v : path.increments) v = sd * stream.normal();
  return path;
}

double TimeChange::s_at(double time) const {
  if (t.empty()) return 0.0;
  if (time <= t.front()) return s.front();
  if (time >= t.back()) return s.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const auto i = static_cast<std::size_t>(it - t.begin());
  const double w = (time - t[i - 1]) / (t[i] - t[i - 1]);
  return s[i - 1] + w * (s[i] - s[i - 1]);
}

double TimeChange::t_at(double s_value) const {
  if (s.empty()) return 0.0;
  if (s_value <= s.front()) return t.front();
  if (s_value >= s.back()) return t.back();
  const auto it = std::lower_bound(s.begin(), s.end(), s_value);
  const auto i = static_cast<std::size_t>(it - s.begin());
  const double ds = s[i] - s[i - 1];
  const double w = ds > 0.0 ? (s_value - s[i - 1]) / ds : 0.0;
  return t[i - 1] + w * (t[i] - t[i - 1]);
}

TimeChange time_change(std::span<const double> x_samples, double dt, double lambda) {
  if (x_samples.size() < 2) throw ParameterError("time change needs at least two samples");
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be non-negative");
  TimeChange tc;
  tc.t.resize(x_samples.size());
  tc.s.resize(x_samples.size());
  tc.s[0] = 0.0;
  tc.t[0] = 0.0;
  for (std::size_t i = 1; i < x_samples.size(); ++i) {
    const double f0 = x_samples[i - 1] * x_samples[i - 1];
    const double f1 = x_samples[i] * x_samples[i];
    tc.t[i] = dt * static_cast<double>(i);
    tc.s[i] = tc.s[i - 1] + 0.5 * lambda * dt * (f0 + f1);
    if (f0 == 0.0 && f1 == 0.0) tc.degenerate = true;
  }
  tc.s_infinity = tc.s.back();
  return tc;
}

TimeChange time_change(const std::function<double(double)>& x_of_t, double lambda, double horizon,
                       double rel_tol, std::size_t initial_steps) {
  if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
  if (initial_steps < 1) throw ParameterError("need at least one step");
  auto build = [&](std::size_t n) {
    std::vector<double> xs(n + 1);
    const double dt = horizon / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) xs[i] = x_of_t(dt * static_cast<double>(i));
    return time_change(xs, dt, lambda);
  };
  std::size_t n = initial_steps;
  TimeChange coarse = build(n);
  for (int level = 0; level < 24; ++level) {
    n *= 2;
    TimeChange fine = build(n);
    const double scale = std::max(std::abs(fine.s_infinity), 1e-300);
    if (std::abs(fine.s_infinity - coarse.s_infinity) <= rel_tol * scale) return fine;
    coarse = std::move(fine);
  }
  throw NumericError("time change did not converge to relative tolerance " + std::to_string(rel_tol));
}

namespace {

WienerPath shift(const WienerPath& in, std::span<const double> mean_history, double lambda, double sign) {
  if (mean_history.size() != in.increments.size()) {
    throw ParameterError("mean history has " + std::to_string(mean_history.size()) +
                         " samples but the path has " + std::to_string(in.increments.size()) + " steps");
  }
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be non-negative");
  WienerPath out = in;
  const double c = sign * 2.0 * std::sqrt(lambda) * in.dt;
  for (std::size_t i = 0; i < out.increments.size(); ++i) out.increments[i] += c * mean_history[i];
  return out;
}

}  // namespace

WienerPath girsanov_shift(const WienerPath& xi, std::span<const double> mean_history, double lambda) {
  return shift(xi, mean_history, lambda, -1.0);
}

WienerPath girsanov_unshift(const WienerPath& w, std::span<const double> mean_history, double lambda) {
  return shift(w, mean_history, lambda, +1.0);
}

}  // namespace qmupl
