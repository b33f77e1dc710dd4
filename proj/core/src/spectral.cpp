#include "qmupl/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>

#include "qmupl/errors.hpp"

namespace qmupl {

namespace {

// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::vector<complex>& v) { return reinterpret_cast<fftw_complex*>(v.data()); }

}  // namespace

struct Fft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Plans() = default;
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
  }
};

Fft::Fft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n == 0) throw ParameterError("FFT size must be positive");
  std::vector<complex> scratch(n);
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n);
  plans_->forward =
      fftw_plan_dft_1d(len, as_fftw(scratch), as_fftw(scratch), FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->backward =
      fftw_plan_dft_1d(len, as_fftw(scratch), as_fftw(scratch), FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plans_->forward == nullptr || plans_->backward == nullptr) throw NumericError("FFTW planning failed");
}

Fft::~Fft() = default;

Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

void Fft::forward(std::vector<complex>& data) const {
  if (data.size() != n_) throw ParameterError("FFT input has the wrong length");
  fftw_execute_dft(plans_->forward, as_fftw(data), as_fftw(data));
}

void Fft::backward(std::vector<complex>& data) const {
  if (data.size() != n_) throw ParameterError("FFT input has the wrong length");
  fftw_execute_dft(plans_->backward, as_fftw(data), as_fftw(data));
}

std::vector<double> fft_wavenumbers(std::size_t n, double length) {
  std::vector<double> k(n);
  const double dk = 2.0 * std::numbers::pi / length;
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<double>(j);
    k[j] = (j < (n + 1) / 2 ? jj : jj - static_cast<double>(n)) * dk;
  }
  return k;
}

}  // namespace qmupl
