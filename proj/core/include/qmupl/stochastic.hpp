#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace qmupl {

/// Seed of the substream for path `index` under `master_seed`. A pure
/// function of its inputs (SplitMix64 finalizer applied to the pair), so
/// every path can be regenerated independently of scheduling.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index);

/// Standard-normal and uniform draws from one substream.
class NormalStream {
 public:
  NormalStream(std::uint64_t master_seed, std::uint64_t index);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Increments of a standard Wiener process on a uniform grid.
struct WienerPath {
  double dt = 0;
  std::vector<double> increments;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;

  [[nodiscard]] std::size_t steps() const { return increments.size(); }
  [[nodiscard]] double horizon() const { return dt * static_cast<double>(increments.size()); }
  /// W at the grid points, starting with W_0 = 0 (size steps() + 1).
  [[nodiscard]] std::vector<double> cumulative() const;
  /// Same Brownian path sampled on a grid `factor` times coarser.
  [[nodiscard]] WienerPath coarsen(std::size_t factor) const;
};

/// Throws ParameterError if dt <= 0 or horizon < dt. The step count is
/// horizon/dt rounded to the nearest integer.
WienerPath sample_path(double horizon, double dt, std::uint64_t seed, std::uint64_t index);

/// s_t = lambda * integral_0^t X_u^2 du on the sampling grid.
struct TimeChange {
  std::vector<double> t;
  std::vector<double> s;
  double s_infinity = 0;  // value at the end of the grid
  bool degenerate = false;  // X vanished on a whole sub-interval

  /// Linear interpolation of s at time `time`, clamped to the grid.
  [[nodiscard]] double s_at(double time) const;
  /// Inverse map; returns the last grid time if `s_value` >= s_infinity.
  [[nodiscard]] double t_at(double s_value) const;
};

/// Trapezoidal cumulative integral of lambda X^2 on a uniform grid of
/// spacing dt. Needs at least two samples.
TimeChange time_change(std::span<const double> x_samples, double dt, double lambda);

/// Same integral for a callable X(t) on [0, horizon]; the grid is doubled
/// until s_infinity changes by less than `rel_tol` (relative).
TimeChange time_change(const std::function<double(double)>& x_of_t, double lambda, double horizon,
                       double rel_tol = 1e-6, std::size_t initial_steps = 1024);

/// dW = dxi - 2 sqrt(lambda) <q> dt, step by step. `mean_history` holds <q>
/// at the left end of each step (same length as the increments).
WienerPath girsanov_shift(const WienerPath& xi, std::span<const double> mean_history, double lambda);
/// Inverse of girsanov_shift: dxi = dW + 2 sqrt(lambda) <q> dt.
WienerPath girsanov_unshift(const WienerPath& w, std::span<const double> mean_history, double lambda);

}  // namespace qmupl
