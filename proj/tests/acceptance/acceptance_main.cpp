#include <cstdio>

#include "qmupl/verify.hpp"

int main() {
  qmupl::verify::Options opt;
  opt.on_result = [](const qmupl::verify::CriterionResult& r) {
    std::printf("%s\n", qmupl::verify::format_line(r).c_str());
    std::fflush(stdout);
  };
  int failed = 0;
  for (const auto& r : qmupl::verify::run_suite("all", opt)) failed += !r.pass;
  std::printf("%d of 13 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
