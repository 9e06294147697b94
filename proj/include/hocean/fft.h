#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hocean {

/// In-place radix-2 transforms on square n x n row-major grids.
///
/// `inverse` computes f(x) = sum_k F(k) exp(+2 pi i k x / n) with no 1/n
/// scaling, so a spectrum of Fourier coefficients maps straight to samples.
/// `forward` uses exp(-2 pi i ...) and is also unscaled.
class Fft2d {
 public:
  explicit Fft2d(std::size_t n);

  std::size_t size() const { return n_; }
  void inverse(std::span<std::complex<double>> grid) const;
  void forward(std::span<std::complex<double>> grid) const;

 private:
  void transform(std::span<std::complex<double>> grid, bool inverse) const;
  void transform_line(std::complex<double>* data, std::size_t stride, bool inverse,
                      std::vector<std::complex<double>>& scratch) const;

  std::size_t n_;
  std::size_t log2n_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<std::complex<double>> twiddles_;  // exp(-2 pi i j / n), j < n/2
};

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace hocean
