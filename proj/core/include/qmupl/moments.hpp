#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qmupl {

/// Welford accumulator with the parallel (Chan et al.) merge.
struct RunningMoments {
  std::uint64_t n = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x);
  void merge(const RunningMoments& other);
  [[nodiscard]] bool variance_defined() const { return n >= 2; }
  /// Unbiased sample variance; NaN when n < 2.
  [[nodiscard]] double variance() const;
  /// sqrt(variance / n); NaN when n < 2.
  [[nodiscard]] double standard_error() const;
};

/// Per-observable, per-time-point moments of an ensemble.
class MomentStats {
 public:
  MomentStats() = default;
  MomentStats(std::vector<std::string> observables, std::vector<double> times);

  [[nodiscard]] const std::vector<std::string>& observables() const { return observables_; }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] std::size_t observable_index(const std::string& name) const;

  /// `values` holds observable o at time i at position o * times().size() + i.
  void add_path(std::span<const double> values);
  /// Throws ParameterError unless both sides share observables and times.
  void merge(const MomentStats& other);

  [[nodiscard]] const RunningMoments& cell(std::size_t observable, std::size_t time) const;
  [[nodiscard]] std::uint64_t count() const { return paths_; }
  [[nodiscard]] double mean(std::size_t observable, std::size_t time) const { return cell(observable, time).mean; }
  [[nodiscard]] double variance(std::size_t observable, std::size_t time) const {
    return cell(observable, time).variance();
  }
  [[nodiscard]] double standard_error(std::size_t observable, std::size_t time) const {
    return cell(observable, time).standard_error();
  }
  [[nodiscard]] bool variance_defined() const { return paths_ >= 2; }

  [[nodiscard]] std::vector<double> mean_series(const std::string& name) const;
  [[nodiscard]] std::vector<double> variance_series(const std::string& name) const;
  [[nodiscard]] std::vector<double> stderr_series(const std::string& name) const;

 private:
  std::vector<std::string> observables_;
  std::vector<double> times_;
  std::vector<RunningMoments> cells_;
  std::uint64_t paths_ = 0;
};

}  // namespace qmupl
