#include "hocean/fft.h"

#include <cmath>

#include "hocean/error.h"
#include "hocean/spectrum.h"

namespace hocean {

Fft2d::Fft2d(std::size_t n) : n_(n), log2n_(0) {
  if (!is_power_of_two(n)) throw ConfigError("fft size must be a power of two");
  while ((std::size_t{1} << log2n_) < n) ++log2n_;
  bit_reverse_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < log2n_; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n_ - 1 - b);
    }
    bit_reverse_[i] = r;
  }
  twiddles_.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double a = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    twiddles_[j] = {std::cos(a), std::sin(a)};
  }
}

void Fft2d::transform_line(std::complex<double>* data, std::size_t stride, bool inverse,
                           std::vector<std::complex<double>>& buf) const {
  buf.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) buf[bit_reverse_[i]] = data[i * stride];
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const std::complex<double> w = twiddles_[j * step];
        const double wr = w.real();
        const double wi = inverse ? -w.imag() : w.imag();
        const std::complex<double> u = buf[start + j];
        const std::complex<double> x = buf[start + j + half];
        const std::complex<double> v{x.real() * wr - x.imag() * wi, x.real() * wi + x.imag() * wr};
        buf[start + j] = u + v;
        buf[start + j + half] = u - v;
      }
    }
  }
  for (std::size_t i = 0; i < n_; ++i) data[i * stride] = buf[i];
}

void Fft2d::transform(std::span<std::complex<double>> grid, bool inverse) const {
  if (grid.size() != n_ * n_) throw ConfigError("fft grid has the wrong size");
  const auto n = static_cast<long>(n_);
  std::complex<double>* data = grid.data();
#pragma omp parallel
  {
    std::vector<std::complex<double>> buf;
#pragma omp for schedule(static)
    for (long row = 0; row < n; ++row) transform_line(data + row * n, 1, inverse, buf);
#pragma omp for schedule(static)
    for (long col = 0; col < n; ++col) transform_line(data + col, n_, inverse, buf);
  }
}

void Fft2d::inverse(std::span<std::complex<double>> grid) const { transform(grid, true); }
void Fft2d::forward(std::span<std::complex<double>> grid) const { transform(grid, false); }

}  // namespace hocean
