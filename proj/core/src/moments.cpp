#include "qmupl/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmupl/errors.hpp"

namespace qmupl {

void RunningMoments::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.n == 0) return;
  if (n == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(other.n);
  const double total = na + nb;
  const double d = other.mean - mean;
  mean += d * nb / total;
  m2 += other.m2 + d * d * na * nb / total;
  n += other.n;
}

double RunningMoments::variance() const {
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return m2 / static_cast<double>(n - 1);
}

double RunningMoments::standard_error() const {
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(variance() / static_cast<double>(n));
}

MomentStats::MomentStats(std::vector<std::string> observables, std::vector<double> times)
    : observables_(std::move(observables)), times_(std::move(times)),
      cells_(observables_.size() * times_.size()) {}

std::size_t MomentStats::observable_index(const std::string& name) const {
  const auto it = std::find(observables_.begin(), observables_.end(), name);
  if (it == observables_.end()) throw ParameterError("unknown observable '" + name + "'");
  return static_cast<std::size_t>(it - observables_.begin());
}

void MomentStats::add_path(std::span<const double> values) {
  if (values.size() != cells_.size()) throw ParameterError("path record has the wrong size");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i].add(values[i]);
  ++paths_;
}

void MomentStats::merge(const MomentStats& other) {
  if (other.observables_ != observables_ || other.times_ != times_) {
    throw ParameterError("cannot merge statistics with different observables or times");
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i].merge(other.cells_[i]);
  paths_ += other.paths_;
}

const RunningMoments& MomentStats::cell(std::size_t observable, std::size_t time) const {
  if (observable >= observables_.size() || time >= times_.size()) throw ParameterError("moment index out of range");
  return cells_[observable * times_.size() + time];
}

std::vector<double> MomentStats::mean_series(const std::string& name) const {
  const std::size_t o = observable_index(name);
  std::vector<double> out(times_.size());
  for (std::size_t i = 0; i < times_.size(); ++i) out[i] = mean(o, i);
  return out;
}

std::vector<double> MomentStats::variance_series(const std::string& name) const {
  const std::size_t o = observable_index(name);
  std::vector<double> out(times_.size());
  for (std::size_t i = 0; i < times_.size(); ++i) out[i] = variance(o, i);
  return out;
}

std::vector<double> MomentStats::stderr_series(const std::string& name) const {
  const std::size_t o = observable_index(name);
  std::vector<double> out(times_.size());
  for (std::size_t i = 0; i < times_.size(); ++i) out[i] = standard_error(o, i);
  return out;
}

}  // namespace qmupl
