#include <fmt/format.h>

#include <chrono>
#include <exception>
#include <map>

#include "checks.hpp"
#include "qmupl/errors.hpp"

namespace qmupl::verify {

namespace {

using Fn = CriterionResult (*)(const Options&);

const std::map<int, Fn>& criteria() {
  static const std::map<int, Fn> table{
      {1, closed_form_identities}, {2, riccati_oracle},         {3, positivity_sweep},
      {4, situation_a},            {5, hitting_time},           {6, delocalization},
      {7, ensemble_classicality},  {8, covariance_vs_mc},       {9, grid_vs_gaussian},
      {10, collapse_diagnostic},   {11, unraveling_consistency}, {12, physical_magnitudes},
      {13, appendix_bounds},
  };
  return table;
}

const std::map<std::string, std::vector<int>>& suites() {
  static const std::map<std::string, std::vector<int>> table{
      {"closed-forms", {1, 2, 3, 4, 12}},
      {"monte-carlo", {5, 6, 7, 8, 13}},
      {"grid-vs-gauss", {9, 10, 11}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}},
  };
  return table;
}

}  // namespace

std::vector<std::string> suite_names() { return {"closed-forms", "monte-carlo", "grid-vs-gauss", "all"}; }

std::vector<int> suite_criteria(const std::string& suite) {
  const auto it = suites().find(suite);
  if (it == suites().end()) throw ConfigError("unknown verify suite '" + suite + "'");
  return it->second;
}

CriterionResult run_criterion(int id, const Options& options) {
  const auto it = criteria().find(id);
  if (it == criteria().end()) throw ConfigError(fmt::format("no acceptance criterion {}", id));
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = it->second(options);
  } catch (const std::exception& e) {
    r.id = id;
    r.title = "error";
    r.pass = false;
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (options.on_result) options.on_result(r);
  return r;
}

std::vector<CriterionResult> run_suite(const std::string& suite, const Options& options) {
  std::vector<CriterionResult> out;
  for (int id : suite_criteria(suite)) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt::format("[{}] {:>2} {:<36} {:7.1f}s  {}", r.pass ? "PASS" : "FAIL", r.id, r.title, r.seconds, r.detail);
}

}  // namespace qmupl::verify
