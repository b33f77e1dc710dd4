#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qmupl/moments.hpp"

namespace qmupl {

struct EnsembleSpec {
  std::string scenario;
  std::size_t n_paths = 1;
  std::uint64_t seed = 0;
  double dt = 1e-3;
  double horizon = 1.0;
  std::size_t record_every = 100;  // steps between recorded time points
  std::vector<std::string> observables;  // empty: everything the scenario offers
  std::map<std::string, double> params;  // scenario-specific numbers
  unsigned threads = 0;  // 0: std::thread::hardware_concurrency()

  /// Throws ParameterError on n_paths == 0, dt <= 0, horizon < dt or
  /// record_every == 0.
  void validate() const;
  [[nodiscard]] std::size_t steps() const;
  [[nodiscard]] double param(const std::string& key, double fallback) const;
};

/// Recorded time points: every record_every steps from 0, plus the last step.
std::vector<double> record_times(const EnsembleSpec& spec);

/// A family of independent paths. Implementations must be stateless so
/// that run_path can be called concurrently.
class Scenario {
 public:
  virtual ~Scenario() = default;
  [[nodiscard]] virtual std::vector<std::string> observables(const EnsembleSpec& spec) const = 0;
  [[nodiscard]] virtual std::vector<double> times(const EnsembleSpec& spec) const { return record_times(spec); }
  /// Fills `out` (observable-major, times().size() per observable) for path
  /// `index`. Noise must come from substreams of (spec.seed, index).
  virtual void run_path(const EnsembleSpec& spec, std::uint64_t index, std::span<double> out) const = 0;
  /// Keys accepted in spec.params.
  [[nodiscard]] virtual std::vector<std::string> parameter_keys() const { return {}; }
};

class ScenarioRegistry {
 public:
  void add(const std::string& name, std::shared_ptr<const Scenario> scenario);
  /// Throws ConfigError for an unknown name.
  [[nodiscard]] const Scenario& find(const std::string& name) const;
  [[nodiscard]] std::vector<std::string> names() const;

 private:
  std::map<std::string, std::shared_ptr<const Scenario>> scenarios_;
};

/// Registry with the built-in scenarios (see scenarios.hpp).
const ScenarioRegistry& default_registry();

/// Runs spec.n_paths paths in fixed chunks, accumulates each chunk
/// separately and merges chunks in index order, so the result does not
/// depend on the thread count.
MomentStats run_ensemble(const EnsembleSpec& spec, const ScenarioRegistry& registry = default_registry());

struct OracleVerdict {
  std::vector<double> z;
  std::size_t exceedances = 0;  // points with |z| > threshold
  double exceed_fraction = 0;
  double max_abs_z = 0;
  bool pass = false;
  std::string note;
};

/// Per-point z = (mean - oracle) / stderr. Passes when the fraction of
/// points beyond `z_threshold` is at most `max_fraction`. Points whose
/// standard error is zero count as exceedances unless mean == oracle.
OracleVerdict score_against_oracle(const MomentStats& stats, const std::string& observable,
                                   std::span<const double> oracle, double z_threshold = 3.0,
                                   double max_fraction = 0.01);

}  // namespace qmupl
