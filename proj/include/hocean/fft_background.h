/**
 * @file fft_background.h
 * @brief Periodic far-field height field from the shared directional spectrum.
 *
 * Spectral amplitudes live on the FFT's natural index order: array column i
 * holds wave number m = i for i < n/2 and i - n otherwise (same for rows),
 * with k = 2 pi m / domain_size. The Nyquist row/column and k = 0 are zero.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "hocean/height_field.h"
#include "hocean/spectrum.h"

namespace hocean {

struct FftState {
  int n = 0;
  double domain_size = 0.0;
  double g = kStandardGravity;
  double choppiness = 1.0;
  std::uint64_t rng_seed = 0;
  std::vector<std::complex<double>> h0;  ///< initial amplitudes, row-major
  std::vector<double> dispersion;        ///< omega(k) = sqrt(g |k|)

  double dk() const;
  /// Signed wave number index for array position `i`.
  int wave_index(int i) const { return i < n / 2 ? i : i - n; }
  /// Array position of the mirrored wave vector -k.
  int mirror(int i) const { return (n - i) % n; }
};

/// Expected variance carried by the bin at (kx, ky): S(w, theta) (dw/dk) / k * dk^2.
double bin_variance(const DirectionalSpectrum& spectrum, double kx, double ky, double dk);

/// Complex-Gaussian amplitudes with E|h0(k)|^2 = bin_variance / 2, so the
/// expected tile variance equals the spectrum integrated over the resolved band.
/// Throws ConfigError when n is not a power of two or domain_size <= 0.
FftState init_fft(const DirectionalSpectrum& spectrum, int n, double domain_size, std::uint64_t seed,
                  double choppiness = 1.0);

/// Builds a state from explicit amplitudes (tests, single-mode experiments).
FftState make_fft_state(int n, double domain_size, double g, std::vector<std::complex<double>> h0,
                        double choppiness = 1.0);

/// Hermitian spectrum H(k, t) = h0(k) e^{-i w t} + conj(h0(-k)) e^{i w t}.
std::vector<std::complex<double>> evolved_spectrum(const FftState& state, double t);

struct SynthesisDiagnostics {
  double max_imaginary = 0.0;  ///< largest |Im h| before it was discarded
  double max_abs_height = 0.0;
};

/// Height, choppy displacement and wrap-around finite-difference normals at time t.
HeightField evolve_and_synthesize(const FftState& state, double t, SynthesisDiagnostics* diag = nullptr);

}  // namespace hocean
