#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qmupl::verify {

struct Options {
  std::size_t n_paths = 10000;  // Monte Carlo criteria
  std::uint64_t seed = 7;
  unsigned threads = 0;
  /// Called once per finished criterion, e.g. to stream a report.
  std::function<void(const struct CriterionResult&)> on_result;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// "closed-forms", "monte-carlo", "grid-vs-gauss", "all".
std::vector<std::string> suite_names();
/// Criterion ids of a suite; throws ConfigError for an unknown name.
std::vector<int> suite_criteria(const std::string& suite);

/// Runs one criterion (1..13). Exceptions inside a check are caught and
/// reported as a failure.
CriterionResult run_criterion(int id, const Options& options);
std::vector<CriterionResult> run_suite(const std::string& suite, const Options& options);

/// One line per criterion: "[PASS] 5 hitting time ... detail".
std::string format_line(const CriterionResult& r);

}  // namespace qmupl::verify
