#include "qmupl/master.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmupl/errors.hpp"

namespace qmupl {

double DensityProfile::integral() const {
  double s = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) s += 0.5 * (p[i - 1] + p[i]) * (x[i] - x[i - 1]);
  return s;
}

double kernel_F(double k, double x, double t, const Model& model) {
  const double km = k / model.mass;
  return std::exp(-0.5 * model.lambda * t * (x * x - km * x * t + km * km * t * t / 3.0));
}

double alpha(const Model& model, double t) {
  if (!(t > 0.0)) throw ParameterError("alpha needs t > 0");
  if (!(model.lambda > 0.0)) throw ParameterError("alpha needs lambda > 0");
  return 3.0 * model.mass * model.mass / (2.0 * model.hbar * model.hbar * model.lambda * t * t * t);
}

DensityProfile density_convolve(const DensityProfile& pS, double t, const Model& model) {
  if (pS.x.size() < 2 || pS.x.size() != pS.p.size()) throw ParameterError("density and positions must align");
  DensityProfile out = pS;
  out.t = t;
  if (t == 0.0 || model.lambda == 0.0) return out;
  const double dx = pS.dx();
  const double a = alpha(model, t);
  const double width = 1.0 / std::sqrt(a);
  if (width < dx / 10.0) {
    out.delta_regime = true;
    return out;
  }
  if (width < dx) {
    throw PreconditionError("smoothing width is between dx/10 and dx; refine the grid");
  }
  const double sd = std::sqrt(0.5 / a);
  const auto half = static_cast<std::ptrdiff_t>(std::ceil(12.0 * sd / dx));
  std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
  double wsum = 0.0;
  for (std::ptrdiff_t j = -half; j <= half; ++j) {
    const double d = static_cast<double>(j) * dx;
    const double v = std::exp(-a * d * d);
    w[static_cast<std::size_t>(j + half)] = v;
    wsum += v;
  }
  for (double& v : w) v /= wsum;
  const auto n = static_cast<std::ptrdiff_t>(pS.p.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    for (std::ptrdiff_t j = lo; j <= hi; ++j) s += w[static_cast<std::size_t>(i - j + half)] * pS.p[static_cast<std::size_t>(j)];
    out.p[static_cast<std::size_t>(i)] = s;
  }
  const double total = out.integral();
  if (total > 0.0) {
    const double scale = pS.integral() / total;
    for (double& v : out.p) v *= scale;
  }
  return out;
}

DensityProfile pure_schrodinger_density(const GaussianState& initial, const std::vector<double>& x, double t,
                                        const Model& model) {
  initial.validate();
  const complex at = a_exact(t, initial.a, model.schrodinger());
  const double mean = initial.x_bar + model.hbar_over_m() * initial.k_bar * t;
  const double ar = at.real();
  const double norm = std::sqrt(2.0 * ar / std::numbers::pi);
  DensityProfile out;
  out.x = x;
  out.t = t;
  out.p.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean;
    out.p[i] = norm * std::exp(-2.0 * ar * d * d);
  }
  return out;
}

double measure_mu(const DensityProfile& p, double lo, double hi) {
  if (p.x.size() < 2 || p.x.size() != p.p.size()) throw ParameterError("density and positions must align");
  const double eps = 1e-12 * (p.x.back() - p.x.front());
  if (!(lo <= hi) || lo < p.x.front() - eps || hi > p.x.back() + eps) {
    throw ParameterError("interval lies outside the density grid");
  }
  lo = std::max(lo, p.x.front());
  hi = std::min(hi, p.x.back());
  double s = 0.0;
  for (std::size_t i = 1; i < p.x.size(); ++i) {
    const double x0 = p.x[i - 1];
    const double x1 = p.x[i];
    const double a = std::max(lo, x0);
    const double b = std::min(hi, x1);
    if (b <= a) continue;
    const double slope = (p.p[i] - p.p[i - 1]) / (x1 - x0);
    const double ya = p.p[i - 1] + slope * (a - x0);
    const double yb = p.p[i - 1] + slope * (b - x0);
    s += 0.5 * (ya + yb) * (b - a);
  }
  return s;
}

double l1_distance(const std::vector<double>& p1, const std::vector<double>& p2, double dx) {
  if (p1.size() != p2.size()) throw ParameterError("densities must share a grid");
  double s = 0.0;
  for (std::size_t i = 0; i < p1.size(); ++i) s += std::abs(p1[i] - p2[i]);
  return s * dx;
}

}  // namespace qmupl
