#include "qmupl/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "qmupl/errors.hpp"

namespace qmupl {

namespace {

constexpr std::size_t kChunk = 32;

}  // namespace

void EnsembleSpec::validate() const {
  if (n_paths == 0) throw ParameterError("n_paths must be at least 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw ParameterError("horizon must be at least dt");
  if (record_every == 0) throw ParameterError("record_every must be at least 1");
}

std::size_t EnsembleSpec::steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }

double EnsembleSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::vector<double> record_times(const EnsembleSpec& spec) {
  const std::size_t n = spec.steps();
  std::vector<double> t;
  for (std::size_t i = 0; i <= n; i += spec.record_every) t.push_back(spec.dt * static_cast<double>(i));
  if (n % spec.record_every != 0) t.push_back(spec.dt * static_cast<double>(n));
  return t;
}

void ScenarioRegistry::add(const std::string& name, std::shared_ptr<const Scenario> scenario) {
  scenarios_[name] = std::move(scenario);
}

const Scenario& ScenarioRegistry::find(const std::string& name) const {
  const auto it = scenarios_.find(name);
  if (it == scenarios_.end()) throw ConfigError("unknown scenario '" + name + "'");
  return *it->second;
}

std::vector<std::string> ScenarioRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : scenarios_) out.push_back(k);
  return out;
}

MomentStats run_ensemble(const EnsembleSpec& spec, const ScenarioRegistry& registry) {
  spec.validate();
  const Scenario& scenario = registry.find(spec.scenario);
  const std::vector<std::string> all = scenario.observables(spec);
  const std::vector<double> times = scenario.times(spec);
  const std::vector<std::string> keys = scenario.parameter_keys();
  for (const auto& [k, v] : spec.params) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw ConfigError("scenario '" + spec.scenario + "' does not take parameter '" + k + "'");
    }
  }
  std::vector<std::size_t> pick;
  std::vector<std::string> selected;
  if (spec.observables.empty()) {
    selected = all;
    for (std::size_t i = 0; i < all.size(); ++i) pick.push_back(i);
  } else {
    for (const std::string& name : spec.observables) {
      const auto it = std::find(all.begin(), all.end(), name);
      if (it == all.end()) throw ConfigError("scenario '" + spec.scenario + "' has no observable '" + name + "'");
      pick.push_back(static_cast<std::size_t>(it - all.begin()));
      selected.push_back(name);
    }
  }
  const std::size_t nt = times.size();
  const std::size_t n_chunks = (spec.n_paths + kChunk - 1) / kChunk;
  std::vector<MomentStats> chunks(n_chunks, MomentStats(selected, times));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    std::vector<double> full(all.size() * nt);
    std::vector<double> chosen(selected.size() * nt);
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        const std::size_t begin = c * kChunk;
        const std::size_t end = std::min(spec.n_paths, begin + kChunk);
        for (std::size_t p = begin; p < end; ++p) {
          scenario.run_path(spec, p, full);
          for (std::size_t o = 0; o < pick.size(); ++o) {
            std::copy_n(full.begin() + static_cast<std::ptrdiff_t>(pick[o] * nt), nt,
                        chosen.begin() + static_cast<std::ptrdiff_t>(o * nt));
          }
          chunks[c].add_path(chosen);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_chunks);
        return;
      }
    }
  };
  unsigned n_threads = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_chunks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  MomentStats total(selected, times);
  for (const MomentStats& c : chunks) total.merge(c);
  return total;
}

OracleVerdict score_against_oracle(const MomentStats& stats, const std::string& observable,
                                   std::span<const double> oracle, double z_threshold, double max_fraction) {
  if (oracle.size() != stats.times().size()) throw ParameterError("oracle and statistics time grids differ");
  const std::size_t o = stats.observable_index(observable);
  OracleVerdict v;
  v.z.resize(oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    const double diff = stats.mean(o, i) - oracle[i];
    const double se = stats.standard_error(o, i);
    double z = 0.0;
    if (se > 0.0) {
      z = diff / se;
    } else if (diff != 0.0) {
      z = std::copysign(INFINITY, diff);
    }
    v.z[i] = z;
    v.max_abs_z = std::max(v.max_abs_z, std::abs(z));
    if (std::abs(z) > z_threshold) ++v.exceedances;
  }
  v.exceed_fraction = oracle.empty() ? 0.0 : static_cast<double>(v.exceedances) / static_cast<double>(oracle.size());
  v.pass = v.exceed_fraction <= max_fraction;
  v.note = "time points are correlated along a path; the exceedance fraction is a screening statistic, not a "
           "calibrated test";
  return v;
}

}  // namespace qmupl
