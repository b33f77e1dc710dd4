#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "qmupl/units.hpp"

namespace qmupl {

/// In-place 1-D complex DFT of fixed size (FFTW). Unnormalized both ways.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;

  [[nodiscard]] std::size_t size() const { return n_; }
  void forward(std::vector<complex>& data) const;
  void backward(std::vector<complex>& data) const;

 private:
  struct Plans;
  std::size_t n_;
  std::unique_ptr<Plans> plans_;
};

/// Angular wavenumbers of the DFT bins for a periodic box of length L.
std::vector<double> fft_wavenumbers(std::size_t n, double length);

}  // namespace qmupl
