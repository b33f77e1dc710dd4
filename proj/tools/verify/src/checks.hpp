#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>

#include "qmupl/verify.hpp"

namespace qmupl::verify {

// Accumulates sub-checks of one criterion.
class Check {
 public:
  void require(bool ok, std::string what) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += (ok ? "" : "FAILED ") + std::move(what);
    pass_ = pass_ && ok;
  }
  [[nodiscard]] bool pass() const { return pass_; }
  [[nodiscard]] const std::string& detail() const { return detail_; }

 private:
  bool pass_ = true;
  std::string detail_;
};

// Step-doubling RK4 for y' = f(y), written independently of the library's
// closed forms.
inline std::complex<double> rk4_reference(const std::function<std::complex<double>(std::complex<double>)>& f,
                                          std::complex<double> y, double t, double tol = 1e-13) {
  using C = std::complex<double>;
  auto step = [&](C y0, double h) {
    const C k1 = f(y0);
    const C k2 = f(y0 + 0.5 * h * k1);
    const C k3 = f(y0 + 0.5 * h * k2);
    const C k4 = f(y0 + h * k3);
    return y0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  double h = std::min(1e-3, t), done = 0.0;
  while (done < t) {
    h = std::min(h, t - done);
    const C big = step(y, h);
    const C half = step(step(y, 0.5 * h), 0.5 * h);
    const double err = std::abs(big - half) / (1.0 + std::abs(half));
    if (err <= tol || h < 1e-10) {
      y = half + (half - big) / 15.0;
      done += h;
      if (err < tol / 64.0) h *= 2.0;
    } else {
      h *= 0.5;
    }
  }
  return y;
}

CriterionResult closed_form_identities(const Options& o);
CriterionResult riccati_oracle(const Options& o);
CriterionResult positivity_sweep(const Options& o);
CriterionResult situation_a(const Options& o);
CriterionResult hitting_time(const Options& o);
CriterionResult delocalization(const Options& o);
CriterionResult ensemble_classicality(const Options& o);
CriterionResult covariance_vs_mc(const Options& o);
CriterionResult grid_vs_gaussian(const Options& o);
CriterionResult collapse_diagnostic(const Options& o);
CriterionResult unraveling_consistency(const Options& o);
CriterionResult physical_magnitudes(const Options& o);
CriterionResult appendix_bounds(const Options& o);

inline CriterionResult finish(int id, std::string title, const Check& c) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  r.pass = c.pass();
  r.detail = c.detail();
  return r;
}

}  // namespace qmupl::verify
