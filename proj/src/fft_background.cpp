#include "hocean/fft_background.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "hocean/error.h"
#include "hocean/fft.h"

namespace hocean {

double FftState::dk() const { return 2.0 * kPi / domain_size; }

double bin_variance(const DirectionalSpectrum& spectrum, double kx, double ky, double dk) {
  const double k = std::hypot(kx, ky);
  if (k <= 0.0) return 0.0;
  const double g = spectrum.params.g;
  const double omega = std::sqrt(g * k);
  const double domega_dk = 0.5 * g / omega;
  return spectrum.density(omega, std::atan2(ky, kx)) * domega_dk / k * dk * dk;
}

namespace {

void fill_dispersion(FftState& s) {
  s.dispersion.assign(static_cast<std::size_t>(s.n) * s.n, 0.0);
  const double dk = s.dk();
  for (int j = 0; j < s.n; ++j) {
    for (int i = 0; i < s.n; ++i) {
      const double k = std::hypot(s.wave_index(i) * dk, s.wave_index(j) * dk);
      s.dispersion[static_cast<std::size_t>(j) * s.n + i] = std::sqrt(s.g * k);
    }
  }
}

void check_geometry(int n, double domain_size) {
  if (n < 2 || !is_power_of_two(static_cast<std::size_t>(n))) {
    throw ConfigError("fft.n must be a power of two >= 2");
  }
  if (!(domain_size > 0.0)) throw ConfigError("fft.domain_size must be positive");
}

}  // namespace

FftState init_fft(const DirectionalSpectrum& spectrum, int n, double domain_size, std::uint64_t seed,
                  double choppiness) {
  check_geometry(n, domain_size);
  FftState s;
  s.n = n;
  s.domain_size = domain_size;
  s.g = spectrum.params.g;
  s.choppiness = choppiness;
  s.rng_seed = seed;
  s.h0.assign(static_cast<std::size_t>(n) * n, {0.0, 0.0});
  fill_dispersion(s);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double dk = s.dk();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // Draw for every bin so the stream does not depend on which bins are live.
      const double xr = normal(rng);
      const double xi = normal(rng);
      if (i == n / 2 || j == n / 2) continue;
      const double p = bin_variance(spectrum, s.wave_index(i) * dk, s.wave_index(j) * dk, dk);
      const double amp = std::sqrt(0.25 * p);  // E|h0|^2 = 2 * amp^2 = p / 2
      s.h0[static_cast<std::size_t>(j) * n + i] = {xr * amp, xi * amp};
    }
  }
  return s;
}

FftState make_fft_state(int n, double domain_size, double g, std::vector<std::complex<double>> h0,
                        double choppiness) {
  check_geometry(n, domain_size);
  if (h0.size() != static_cast<std::size_t>(n) * n) throw ConfigError("h0 has the wrong size");
  FftState s;
  s.n = n;
  s.domain_size = domain_size;
  s.g = g;
  s.choppiness = choppiness;
  s.h0 = std::move(h0);
  fill_dispersion(s);
  return s;
}

std::vector<std::complex<double>> evolved_spectrum(const FftState& s, double t) {
  const int n = s.n;
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n) * n);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const int mj = s.mirror(j);
    for (int i = 0; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * n + i;
      const std::size_t midx = static_cast<std::size_t>(mj) * n + s.mirror(i);
      const double phase = s.dispersion[idx] * t;
      const std::complex<double> rot(std::cos(phase), -std::sin(phase));
      out[idx] = s.h0[idx] * rot + std::conj(s.h0[midx]) * std::conj(rot);
    }
  }
  return out;
}

HeightField evolve_and_synthesize(const FftState& s, double t, SynthesisDiagnostics* diag) {
  const int n = s.n;
  const double dk = s.dk();
  std::vector<std::complex<double>> heights = evolved_spectrum(s, t);

  // Pack the two real displacement fields into one complex transform.
  std::vector<std::complex<double>> disp(heights.size());
  const std::complex<double> i_unit(0.0, 1.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * n + i;
      const double kx = s.wave_index(i) * dk;
      const double ky = s.wave_index(j) * dk;
      const double k = std::hypot(kx, ky);
      if (k == 0.0) {
        disp[idx] = 0.0;
        continue;
      }
      const std::complex<double> dx = -i_unit * (kx / k) * heights[idx];
      const std::complex<double> dy = -i_unit * (ky / k) * heights[idx];
      disp[idx] = dx + i_unit * dy;
    }
  }

  const Fft2d fft(static_cast<std::size_t>(n));
  fft.inverse(heights);
  fft.inverse(disp);

  HeightField field(n, n, Vec2{0.0, 0.0}, s.domain_size / n, /*periodic=*/true);
  double max_imag = 0.0;
  double max_abs = 0.0;
  for (std::size_t idx = 0; idx < heights.size(); ++idx) {
    field.height[idx] = heights[idx].real();
    field.displacement[idx] = Vec2{disp[idx].real(), disp[idx].imag()} * s.choppiness;
    max_imag = std::max(max_imag, std::abs(heights[idx].imag()));
    max_abs = std::max(max_abs, std::abs(heights[idx].real()));
  }
  compute_normals(field, /*wrap=*/true);
  if (diag != nullptr) {
    diag->max_imaginary = max_imag;
    diag->max_abs_height = max_abs;
  }
  return field;
}

}  // namespace hocean
