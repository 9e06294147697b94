#include "hocean/patch_synthesis.h"

#include <algorithm>
#include <cmath>

#include "hocean/error.h"

namespace hocean {

PatchGrid patch_grid(const PatchRegion& patch, int resolution) {
  if (resolution < 2) throw ConfigError("patch.res: must be >= 2");
  PatchGrid g;
  g.nx = resolution;
  g.texel = patch.l1 / resolution;
  g.ny = std::max(2, static_cast<int>(std::lround(patch.l2 / g.texel)));
  g.origin = {patch.origin.x + 0.5 * g.texel, patch.origin.y + 0.5 * g.texel};
  return g;
}

LayerStack make_layer_stack(const PatchRegion& patch, int resolution, std::size_t n_layers) {
  LayerStack s;
  s.grid = patch_grid(patch, resolution);
  s.layers.assign(n_layers, std::vector<double>(s.texel_count(), 0.0));
  return s;
}

void clear(LayerStack& stack) {
  for (auto& l : stack.layers) std::fill(l.begin(), l.end(), 0.0);
  stack.clamped_splats = 0;
}

namespace {

double raised_cosine(double u, double support) {
  if (std::abs(u) >= support) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * u / support));
}

int half_width_for(double support) {
  // Largest integer strictly below the support.
  return std::max(0, static_cast<int>(std::ceil(support)) - 1);
}

}  // namespace

SmoothingKernel make_kernel(double radius, double texel, AmplitudeConvention convention,
                            double trough_ratio) {
  SmoothingKernel k;
  k.support = radius / texel;
  const int m = half_width_for(k.support);
  std::vector<double> raw(static_cast<std::size_t>(2 * m + 1));
  for (int i = -m; i <= m; ++i) {
    raw[static_cast<std::size_t>(i + m)] = m == 0 ? 1.0 : raised_cosine(i, k.support);
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  double overlap = 0.0;  // 1-D correlation with a copy shifted by one radius
  for (int i = -m; i <= m; ++i) {
    const double v = raw[static_cast<std::size_t>(i + m)];
    sum += v;
    sum_sq += v * v;
    overlap += v * (m == 0 ? 0.0 : raised_cosine(i + k.support, k.support));
  }
  k.taps.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) k.taps[i] = raw[i] / sum;

  // Smoothed unit splat has peak 1 / sum^2; undo that first.
  const double to_peak = sum * sum;
  if (convention == AmplitudeConvention::kPeak) {
    k.peak_scale = to_peak;
  } else {
    const double beta = trough_ratio;
    const double pair_sq = texel * texel * ((1.0 + beta * beta) * sum_sq * sum_sq - 2.0 * beta * overlap * sum_sq);
    const double target = kPi * radius * radius / 8.0;
    k.peak_scale = to_peak * std::sqrt(target / pair_sq);
  }
  return k;
}

std::vector<SmoothingKernel> build_kernels(const BucketTable& table, double texel,
                                           AmplitudeConvention convention, double trough_ratio) {
  std::vector<SmoothingKernel> out;
  out.reserve(table.size());
  for (const auto& b : table.buckets) out.push_back(make_kernel(b.radius, texel, convention, trough_ratio));
  return out;
}

namespace {

void splat(const WaveParticle& p, const PatchGrid& g, std::vector<double>& layer, std::size_t& clamped) {
  const double u = (p.position.x - g.origin.x) / g.texel;
  const double v = (p.position.y - g.origin.y) / g.texel;
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const double fx = u - fu;
  const double fy = v - fv;
  // Far-away particles are skipped before the integer conversion.
  if (fu < -1.0 || fv < -1.0 || fu > g.nx || fv > g.ny) {
    ++clamped;
    return;
  }
  const int i0 = static_cast<int>(fu);
  const int j0 = static_cast<int>(fv);
  const double w[4] = {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy};
  const int di[4] = {0, 1, 0, 1};
  const int dj[4] = {0, 0, 1, 1};
  bool dropped = false;
  for (int t = 0; t < 4; ++t) {
    const int i = i0 + di[t];
    const int j = j0 + dj[t];
    if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) {
      if (w[t] != 0.0) dropped = true;
      continue;
    }
    layer[static_cast<std::size_t>(j) * g.nx + i] += p.amplitude * w[t];
  }
  if (dropped) ++clamped;
}

}  // namespace

void accumulate(const ParticlePool& pool, LayerStack& stack) {
  const auto n = static_cast<long>(std::min(pool.bucket_count(), stack.layers.size()));
  std::size_t clamped = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : clamped)
  for (long b = 0; b < n; ++b) {
    auto& layer = stack.layers[static_cast<std::size_t>(b)];
    for (const auto& p : pool.bucket(static_cast<std::size_t>(b))) splat(p, stack.grid, layer, clamped);
  }
  stack.clamped_splats += clamped;
}

void accumulate(std::span<const WaveParticle> particles, LayerStack& stack) {
  std::size_t clamped = 0;
  for (const auto& p : particles) {
    if (p.bucket >= stack.layers.size()) throw ConfigError("particle bucket outside the layer stack");
    splat(p, stack.grid, stack.layers[p.bucket], clamped);
  }
  stack.clamped_splats += clamped;
}

namespace {

// Running sums for the raised cosine: y = (B + Re C) / (2 S) with
// B = sum x[n+m], C = sum x[n+m] e^{i pi m / R} over |m| <= M.
struct SlidingCoefficients {
  int m;
  double norm;              // 1 / (2 S)
  double rot_re, rot_im;    // e^{-i pi / R}
  double out_re, out_im;    // e^{-i pi M / R}
  double in_re, in_im;      // e^{i pi (M + 1) / R}
  std::vector<double> ph_re, ph_im;  // e^{i pi m / R}, m = -M..M
};

SlidingCoefficients sliding_coefficients(const SmoothingKernel& k) {
  SlidingCoefficients c{};
  c.m = k.half_width();
  const double r = k.support;
  double sum = 0.0;
  for (int i = -c.m; i <= c.m; ++i) sum += raised_cosine(i, r);
  c.norm = 1.0 / (2.0 * sum);
  c.rot_re = std::cos(kPi / r);
  c.rot_im = -std::sin(kPi / r);
  c.out_re = std::cos(kPi * c.m / r);
  c.out_im = -std::sin(kPi * c.m / r);
  c.in_re = std::cos(kPi * (c.m + 1) / r);
  c.in_im = std::sin(kPi * (c.m + 1) / r);
  for (int i = -c.m; i <= c.m; ++i) {
    c.ph_re.push_back(std::cos(kPi * i / r));
    c.ph_im.push_back(std::sin(kPi * i / r));
  }
  return c;
}

void sliding_rows(std::vector<double>& layer, int nx, int ny, const SlidingCoefficients& c) {
  std::vector<double> row(static_cast<std::size_t>(nx));
  for (int j = 0; j < ny; ++j) {
    double* data = layer.data() + static_cast<std::size_t>(j) * nx;
    std::copy(data, data + nx, row.begin());
    auto x = [&](int i) { return (i >= 0 && i < nx) ? row[static_cast<std::size_t>(i)] : 0.0; };
    double b = 0.0;
    double cr = 0.0;
    double ci = 0.0;
    for (int i = -c.m; i <= c.m; ++i) {
      const double v = x(i);
      b += v;
      cr += v * c.ph_re[static_cast<std::size_t>(i + c.m)];
      ci += v * c.ph_im[static_cast<std::size_t>(i + c.m)];
    }
    for (int n = 0; n < nx; ++n) {
      data[n] = (b + cr) * c.norm;
      const double leave = x(n - c.m);
      const double enter = x(n + c.m + 1);
      b += enter - leave;
      const double tr = cr - leave * c.out_re + enter * c.in_re;
      const double ti = ci - leave * c.out_im + enter * c.in_im;
      cr = tr * c.rot_re - ti * c.rot_im;
      ci = tr * c.rot_im + ti * c.rot_re;
    }
  }
}

void sliding_columns(std::vector<double>& layer, int nx, int ny, const SlidingCoefficients& c) {
  std::vector<double> src(layer);
  const auto w = static_cast<std::size_t>(nx);
  std::vector<double> b(w, 0.0);
  std::vector<double> cr(w, 0.0);
  std::vector<double> ci(w, 0.0);
  for (int m = -c.m; m <= c.m; ++m) {
    if (m < 0 || m >= ny) continue;
    const double* r = src.data() + static_cast<std::size_t>(m) * w;
    const double pr = c.ph_re[static_cast<std::size_t>(m + c.m)];
    const double pi = c.ph_im[static_cast<std::size_t>(m + c.m)];
    for (std::size_t i = 0; i < w; ++i) {
      b[i] += r[i];
      cr[i] += r[i] * pr;
      ci[i] += r[i] * pi;
    }
  }
  for (int n = 0; n < ny; ++n) {
    double* out = layer.data() + static_cast<std::size_t>(n) * w;
    for (std::size_t i = 0; i < w; ++i) out[i] = (b[i] + cr[i]) * c.norm;
    const int leave_row = n - c.m;
    const int enter_row = n + c.m + 1;
    const double* leave = (leave_row >= 0 && leave_row < ny) ? src.data() + static_cast<std::size_t>(leave_row) * w : nullptr;
    const double* enter = (enter_row >= 0 && enter_row < ny) ? src.data() + static_cast<std::size_t>(enter_row) * w : nullptr;
    for (std::size_t i = 0; i < w; ++i) {
      const double lv = leave != nullptr ? leave[i] : 0.0;
      const double ev = enter != nullptr ? enter[i] : 0.0;
      b[i] += ev - lv;
      const double tr = cr[i] - lv * c.out_re + ev * c.in_re;
      const double ti = ci[i] - lv * c.out_im + ev * c.in_im;
      cr[i] = tr * c.rot_re - ti * c.rot_im;
      ci[i] = tr * c.rot_im + ti * c.rot_re;
    }
  }
}

void direct_rows(std::vector<double>& layer, int nx, int ny, const std::vector<double>& taps) {
  const int m = static_cast<int>(taps.size() / 2);
  std::vector<double> row(static_cast<std::size_t>(nx));
  for (int j = 0; j < ny; ++j) {
    double* data = layer.data() + static_cast<std::size_t>(j) * nx;
    std::copy(data, data + nx, row.begin());
    for (int n = 0; n < nx; ++n) {
      double acc = 0.0;
      for (int t = -m; t <= m; ++t) {
        const int i = n + t;
        if (i >= 0 && i < nx) acc += taps[static_cast<std::size_t>(t + m)] * row[static_cast<std::size_t>(i)];
      }
      data[n] = acc;
    }
  }
}

void direct_columns(std::vector<double>& layer, int nx, int ny, const std::vector<double>& taps) {
  const int m = static_cast<int>(taps.size() / 2);
  std::vector<double> src(layer);
  for (int n = 0; n < ny; ++n) {
    for (int i = 0; i < nx; ++i) {
      double acc = 0.0;
      for (int t = -m; t <= m; ++t) {
        const int j = n + t;
        if (j >= 0 && j < ny) acc += taps[static_cast<std::size_t>(t + m)] * src[static_cast<std::size_t>(j) * nx + i];
      }
      layer[static_cast<std::size_t>(n) * nx + i] = acc;
    }
  }
}

}  // namespace

void smooth_layer(std::vector<double>& layer, int nx, int ny, const SmoothingKernel& kernel,
                  SmoothingMethod method) {
  const int width = static_cast<int>(kernel.taps.size());
  if (width > nx || width > ny) throw ConfigError("smoothing kernel is wider than the patch grid");
  if (kernel.half_width() == 0) return;
  if (method == SmoothingMethod::kDirect) {
    direct_rows(layer, nx, ny, kernel.taps);
    direct_columns(layer, nx, ny, kernel.taps);
    return;
  }
  const SlidingCoefficients c = sliding_coefficients(kernel);
  sliding_rows(layer, nx, ny, c);
  sliding_columns(layer, nx, ny, c);
}

HeightField smooth_and_sum(LayerStack& stack, const std::vector<SmoothingKernel>& kernels,
                           SmoothingMethod method) {
  if (kernels.size() != stack.layers.size()) throw ConfigError("one smoothing kernel per layer is required");
  const PatchGrid& g = stack.grid;
  for (const auto& k : kernels) {
    if (static_cast<int>(k.taps.size()) > std::min(g.nx, g.ny)) {
      throw ConfigError("smoothing kernel is wider than the patch grid");
    }
  }
  const auto n_layers = static_cast<long>(stack.layers.size());
#pragma omp parallel for schedule(dynamic)
  for (long l = 0; l < n_layers; ++l) {
    smooth_layer(stack.layers[static_cast<std::size_t>(l)], g.nx, g.ny, kernels[static_cast<std::size_t>(l)], method);
  }
  HeightField field(g.nx, g.ny, g.origin, g.texel, /*periodic=*/false);
  const auto n = static_cast<long>(stack.texel_count());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    double h = 0.0;
    for (std::size_t l = 0; l < stack.layers.size(); ++l) {
      h += kernels[l].peak_scale * stack.layers[l][static_cast<std::size_t>(i)];
    }
    field.height[static_cast<std::size_t>(i)] = h;
  }
  return field;
}

void finish_field(HeightField& field, double choppiness, double mean_radius) {
  compute_normals(field, /*wrap=*/false);
  const double scale = -choppiness * mean_radius;
  for (std::size_t i = 0; i < field.height.size(); ++i) {
    const Vec3 n = field.normal[i];
    const Vec2 grad{-n.x / n.z, -n.y / n.z};
    field.displacement[i] = grad * scale;
  }
}

}  // namespace hocean
