#include "hocean/spectrum.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hocean/error.h"

namespace hocean {

namespace {

constexpr int kBaseSamples = 4096;
constexpr int kMaxSamples = 1 << 22;
constexpr double kQuadratureTolerance = 1e-8;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be positive and finite");
  }
}

// Cumulative trapezoid on a uniform grid; returns the grid and running integral.
struct CumulativeEnergy {
  std::vector<double> omega;
  std::vector<double> energy;
};

CumulativeEnergy cumulative(const SpectrumParams& p, double a, double b, int intervals) {
  CumulativeEnergy c;
  c.omega.resize(intervals + 1);
  c.energy.resize(intervals + 1);
  const double h = (b - a) / intervals;
  double prev = evaluate_1d(p, a);
  c.omega[0] = a;
  c.energy[0] = 0.0;
  for (int i = 1; i <= intervals; ++i) {
    const double w = (i == intervals) ? b : a + h * i;
    const double s = evaluate_1d(p, w);
    if (!std::isfinite(s)) throw NumericError("spectrum not finite at omega=" + std::to_string(w));
    c.omega[i] = w;
    c.energy[i] = c.energy[i - 1] + 0.5 * (prev + s) * (w - c.omega[i - 1]);
    prev = s;
  }
  return c;
}

double trapezoid(const SpectrumParams& p, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double sum = 0.5 * (evaluate_1d(p, a) + evaluate_1d(p, b));
  for (int i = 1; i < intervals; ++i) sum += evaluate_1d(p, a + h * i);
  return sum * h;
}

double centroid(const SpectrumParams& p, double a, double b) {
  const int n = kBaseSamples;
  const double h = (b - a) / n;
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = a + h * i;
    const double weight = (i == 0 || i == n) ? 0.5 : 1.0;
    const double s = evaluate_1d(p, w) * weight;
    num += w * s;
    den += s;
  }
  return den > 0.0 ? num / den : 0.5 * (a + b);
}

// Frequency in [a, b] with S_J(w) (b - a) == energy. The crossing nearest to
// `hint` wins when the interval straddles the peak and there are two.
double mean_value_frequency(const SpectrumParams& p, double a, double b, double energy,
                            double hint) {
  const double width = b - a;
  const double level = energy / width;
  const int n = 512;
  const double h = width / n;
  double best_lo = 0.0;
  double best_hi = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  double f_prev = evaluate_1d(p, a) - level;
  for (int i = 1; i <= n; ++i) {
    const double w0 = a + h * (i - 1);
    const double w1 = (i == n) ? b : a + h * i;
    const double f = evaluate_1d(p, w1) - level;
    if (f_prev == 0.0 || (f_prev < 0.0) != (f < 0.0)) {
      const double mid = 0.5 * (w0 + w1);
      const double dist = std::abs(mid - hint);
      if (dist < best_dist) {
        best_dist = dist;
        best_lo = w0;
        best_hi = w1;
      }
    }
    f_prev = f;
  }
  if (!std::isfinite(best_dist)) return hint;
  double lo = best_lo;
  double hi = best_hi;
  double f_lo = evaluate_1d(p, lo) - level;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = evaluate_1d(p, mid) - level;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SpectrumParams derive_params(double u10, double fetch, double g) {
  require_positive(u10, "u10");
  require_positive(fetch, "fetch");
  require_positive(g, "g");
  SpectrumParams p;
  p.u10 = u10;
  p.fetch = fetch;
  p.g = g;
  p.alpha = 0.076 * std::pow(u10 * u10 / (fetch * g), 0.22);
  p.omega_p = 22.0 * std::cbrt(g * g / (u10 * fetch));
  p.gamma = 7.0 * std::pow(g * fetch / (u10 * u10), -0.142);
  return p;
}

void validate(const SpectrumParams& p) {
  require_positive(p.u10, "u10");
  require_positive(p.fetch, "fetch");
  require_positive(p.g, "g");
  require_positive(p.alpha, "alpha");
  require_positive(p.omega_p, "omega_p");
  require_positive(p.gamma, "gamma");
  if (!(p.sigma_low > 0.0 && p.sigma_low < 1.0)) throw ParameterError("sigma_low must lie in (0, 1)");
  if (!(p.sigma_high > 0.0 && p.sigma_high < 1.0)) throw ParameterError("sigma_high must lie in (0, 1)");
}

double evaluate_1d(const SpectrumParams& p, double omega) {
  if (!(omega > 0.0)) throw ParameterError("omega must be positive");
  const double sigma = omega <= p.omega_p ? p.sigma_low : p.sigma_high;
  const double d = omega - p.omega_p;
  const double r = std::exp(-(d * d) / (2.0 * sigma * sigma * p.omega_p * p.omega_p));
  const double ratio = p.omega_p / omega;
  const double ratio2 = ratio * ratio;
  return p.alpha * p.g * p.g * std::pow(omega, -5.0) * std::exp(-1.25 * ratio2 * ratio2) *
         std::pow(p.gamma, r);
}

double spreading_exponent(const SpectrumParams& p, double omega) {
  if (!(omega > 0.0)) throw ParameterError("omega must be positive");
  const double mu = omega <= p.omega_p ? 5.0 : -2.5;
  return 16.0 * std::pow(omega / p.omega_p, mu);
}

double wrap_angle(double theta) {
  if (theta >= -kPi && theta <= kPi) return theta;
  double t = std::fmod(theta + kPi, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  return t - kPi;
}

double evaluate_dir(const SpectrumParams& p, double omega, double theta) {
  const double s = spreading_exponent(p, omega);
  const double norm = std::exp(std::lgamma(s + 1.0) - std::lgamma(s + 0.5)) / (2.0 * std::sqrt(kPi));
  const double c = std::abs(std::cos(0.5 * wrap_angle(theta)));
  return norm * std::pow(c, 2.0 * s);
}

double evaluate_2d(const SpectrumParams& p, double omega, double theta) {
  return evaluate_1d(p, omega) * evaluate_dir(p, omega, theta);
}

double integrate_1d(const SpectrumParams& p, double a, double b) {
  int n = kBaseSamples;
  double prev = trapezoid(p, a, b, n);
  while (n < kMaxSamples) {
    n *= 2;
    const double next = trapezoid(p, a, b, n);
    if (!std::isfinite(next)) throw NumericError("spectrum integral is not finite");
    if (std::abs(next - prev) <= kQuadratureTolerance * std::abs(next)) return next;
    prev = next;
  }
  return prev;
}

int BucketTable::nearest_radius(double radius) const {
  int best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (const auto& b : buckets) {
    const double err = std::abs(b.radius - radius);
    if (err < best_err) {
      best_err = err;
      best = b.index;
    }
  }
  return best;
}

BucketTable build_buckets(const SpectrumParams& p, int n_omega, int n_theta,
                          BucketFrequency representative) {
  if (n_omega < 2) throw ParameterError("n_omega must be >= 2");
  if (n_theta < 2) throw ParameterError("n_theta must be >= 2");
  validate(p);

  BucketTable table;
  table.n_omega = n_omega;
  table.n_theta = n_theta;
  table.omega_min = band_low(p);
  table.omega_max = band_high(p);
  table.g = p.g;

  // Refine the cumulative grid with the same stopping rule as integrate_1d.
  int intervals = kBaseSamples;
  CumulativeEnergy cum = cumulative(p, table.omega_min, table.omega_max, intervals);
  while (intervals < kMaxSamples) {
    CumulativeEnergy finer = cumulative(p, table.omega_min, table.omega_max, intervals * 2);
    const double a = cum.energy.back();
    const double b = finer.energy.back();
    cum = std::move(finer);
    intervals *= 2;
    if (std::abs(b - a) <= kQuadratureTolerance * std::abs(b)) break;
  }
  const double total = cum.energy.back();
  if (!(total > 0.0) || !std::isfinite(total)) throw NumericError("band energy is not positive");

  // Invert the cumulative energy at the quantiles k / n_omega.
  std::vector<double> edges(n_omega + 1);
  edges.front() = table.omega_min;
  edges.back() = table.omega_max;
  for (int k = 1; k < n_omega; ++k) {
    const double target = total * k / n_omega;
    const auto it = std::lower_bound(cum.energy.begin(), cum.energy.end(), target);
    const std::size_t hi = static_cast<std::size_t>(it - cum.energy.begin());
    const std::size_t lo = hi - 1;
    const double e0 = cum.energy[lo];
    const double e1 = cum.energy[hi];
    const double f = e1 > e0 ? (target - e0) / (e1 - e0) : 0.0;
    edges[k] = cum.omega[lo] + f * (cum.omega[hi] - cum.omega[lo]);
  }

  table.buckets.reserve(n_omega);
  for (int i = 0; i < n_omega; ++i) {
    FrequencyBucket b;
    b.index = i;
    b.omega_low = edges[i];
    b.omega_high = edges[i + 1];
    b.delta_omega = b.omega_high - b.omega_low;
    b.energy_density = integrate_1d(p, b.omega_low, b.omega_high);
    const double c = centroid(p, b.omega_low, b.omega_high);
    switch (representative) {
      case BucketFrequency::kCentroid:
        b.omega = c;
        break;
      case BucketFrequency::kMidpoint:
        b.omega = 0.5 * (b.omega_low + b.omega_high);
        break;
      case BucketFrequency::kMeanValue:
        b.omega = mean_value_frequency(p, b.omega_low, b.omega_high, b.energy_density, c);
        break;
    }
    b.radius = kPi * p.g / (b.omega * b.omega);
    b.speed = p.g / b.omega;
    table.buckets.push_back(b);
  }
  table.total_energy = total;
  return table;
}

}  // namespace hocean
