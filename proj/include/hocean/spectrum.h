/**
 * @file spectrum.h
 * @brief JONSWAP directional spectrum and the equal-energy frequency buckets.
 *
 * Both the FFT background and the wave-particle patches sample this one
 * model, so everything downstream shares the same energy distribution and
 * the same deep-water dispersion (k = w^2/g, c = g/w, r = pi g / w^2).
 */
#pragma once

#include <cstddef>
#include <vector>

namespace hocean {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kStandardGravity = 9.81;

struct SpectrumParams {
  double u10 = 5.0;        ///< wind speed at 10 m (m/s)
  double fetch = 10000.0;  ///< fetch (m)
  double g = kStandardGravity;
  double alpha = 0.0;    ///< derived
  double omega_p = 0.0;  ///< derived peak angular frequency (rad/s)
  double gamma = 0.0;    ///< derived peak enhancement
  double sigma_low = 0.07;   ///< peak width for w <= wp
  double sigma_high = 0.09;  ///< peak width for w > wp
};

/// Fetch-limited JONSWAP parameterization. Throws ParameterError unless all
/// inputs are positive.
SpectrumParams derive_params(double u10, double fetch, double g = kStandardGravity);

/// Throws ParameterError if any field is out of range (including sigmas outside (0, 1)).
void validate(const SpectrumParams& params);

/// One-dimensional JONSWAP density S_J(w), m^2 s / rad.
double evaluate_1d(const SpectrumParams& params, double omega);

/// Mitsuyasu spreading exponent s(w) = 16 (w/wp)^mu.
double spreading_exponent(const SpectrumParams& params, double omega);

/// Normalized cos-2s spreading. `theta` is relative to the mean direction and
/// is wrapped to [-pi, pi] before use.
double evaluate_dir(const SpectrumParams& params, double omega, double theta);

/// S(w, theta) = S_J(w) Dir(w, theta).
double evaluate_2d(const SpectrumParams& params, double omega, double theta);

double wrap_angle(double theta);

struct DirectionalSpectrum {
  SpectrumParams params;
  double mean_direction = 0.0;  ///< radians, world frame

  /// Density for a world-frame propagation angle.
  double density(double omega, double world_angle) const {
    return evaluate_2d(params, omega, world_angle - mean_direction);
  }
};

/// Which point of a bucket interval stands in for the whole bucket.
enum class BucketFrequency {
  kMeanValue,  ///< S_J(w_i) dw_i equals the bucket's integrated energy
  kCentroid,   ///< energy-weighted mean frequency
  kMidpoint,
};

struct FrequencyBucket {
  int index = 0;
  double omega = 0.0;        ///< representative frequency (rad/s)
  double omega_low = 0.0;    ///< interval start
  double omega_high = 0.0;   ///< interval end
  double delta_omega = 0.0;  ///< omega_high - omega_low
  double radius = 0.0;       ///< pi g / w^2 (m)
  double speed = 0.0;        ///< g / w (m/s)
  double energy_density = 0.0;  ///< integral of S_J over the interval (m^2)
};

struct BucketTable {
  std::vector<FrequencyBucket> buckets;
  int n_omega = 0;
  int n_theta = 0;
  double total_energy = 0.0;  ///< integral of S_J over [omega_min, omega_max]
  double omega_min = 0.0;
  double omega_max = 0.0;
  double g = kStandardGravity;

  std::size_t size() const { return buckets.size(); }
  const FrequencyBucket& operator[](std::size_t i) const { return buckets[i]; }
  double delta_theta() const { return 2.0 * kPi / n_theta; }

  /// Index of the bucket whose particle radius is closest to `radius`
  /// (ties go to the lower index).
  int nearest_radius(double radius) const;
};

/// Sampling band [0.5 wp, 2.5 wp].
inline double band_low(const SpectrumParams& p) { return 0.5 * p.omega_p; }
inline double band_high(const SpectrumParams& p) { return 2.5 * p.omega_p; }

/// Adaptive trapezoid integral of S_J over [a, b]: starts at 4096 intervals and
/// doubles until successive estimates agree to 1e-8 relative.
double integrate_1d(const SpectrumParams& params, double a, double b);

/// Equal-energy partition of [0.5 wp, 2.5 wp] into `n_omega` buckets.
/// Throws ParameterError for n_omega < 2 or n_theta < 2 and NumericError if
/// the spectrum is not finite on the band.
BucketTable build_buckets(const SpectrumParams& params, int n_omega, int n_theta,
                          BucketFrequency representative = BucketFrequency::kMeanValue);

}  // namespace hocean
