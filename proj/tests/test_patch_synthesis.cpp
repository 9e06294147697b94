#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hocean/error.h"
#include "hocean/patch_synthesis.h"

using namespace hocean;

namespace {

const PatchRegion kPatch{{0.0, 0.0}, 64.0, 64.0, 6.0};

WaveParticle particle_at(Vec2 pos, double amp, int bucket = 0) {
  WaveParticle p;
  p.position = pos;
  p.direction = {1.0, 0.0};
  p.amplitude = amp;
  p.bucket = static_cast<std::uint16_t>(bucket);
  return p;
}

double sum_sq(const HeightField& f) {
  double s = 0.0;
  for (double h : f.height) s += h * h;
  return s;
}

}  // namespace

TEST_CASE("patch grid keeps texels square and centered") {
  const PatchGrid g = patch_grid(PatchRegion{{10.0, 20.0}, 100.0, 50.0, 5.0}, 200);
  CHECK(g.nx == 200);
  CHECK(g.ny == 100);
  CHECK(g.texel == doctest::Approx(0.5));
  CHECK(g.origin.x == doctest::Approx(10.25));
  CHECK(g.origin.y == doctest::Approx(20.25));
  CHECK_THROWS_AS(patch_grid(kPatch, 1), ConfigError);
}

TEST_CASE("kernel taps are normalized and symmetric") {
  for (double support : {1.0, 2.5, 7.0, 19.3}) {
    const SmoothingKernel k = make_kernel(support, 1.0, AmplitudeConvention::kPeak, 1.0);
    CHECK(k.support == doctest::Approx(support));
    CHECK(k.taps.size() % 2 == 1);
    CHECK(static_cast<double>(k.half_width()) < support);
    CHECK(std::accumulate(k.taps.begin(), k.taps.end(), 0.0) == doctest::Approx(1.0));
    for (std::size_t i = 0; i < k.taps.size(); ++i) {
      CHECK(k.taps[i] == doctest::Approx(k.taps[k.taps.size() - 1 - i]));
      CHECK(k.taps[i] > 0.0);
    }
  }
}

TEST_CASE("peak convention reproduces the crest amplitude") {
  LayerStack stack = make_layer_stack(kPatch, 64, 1);
  const auto kernels = std::vector<SmoothingKernel>{make_kernel(5.0, 1.0, AmplitudeConvention::kPeak, 1.0)};
  // Texel centers sit at half-integer coordinates.
  accumulate(std::vector<WaveParticle>{particle_at({30.5, 40.5}, 0.37)}, stack);
  const HeightField f = smooth_and_sum(stack, kernels);
  double peak = 0.0;
  for (double h : f.height) peak = std::max(peak, h);
  CHECK(peak == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(f.h(30, 40) == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(std::abs(f.h(35, 40)) < 1e-12);  // support ends at one radius
}

TEST_CASE("energy convention gives a pair the particle's integrated h^2") {
  for (double beta : {1.0, 0.5}) {
    for (double r : {4.0, 9.0}) {
      const double texel = 0.5;
      LayerStack stack = make_layer_stack(kPatch, 128, 1);
      const auto kernels = std::vector<SmoothingKernel>{make_kernel(r, texel, AmplitudeConvention::kEnergy, beta)};
      const double a = 0.2;
      const Vec2 c{32.25, 32.25};
      accumulate(std::vector<WaveParticle>{particle_at(c, a), particle_at(c - Vec2{r, 0.0}, -beta * a)}, stack);
      const HeightField f = smooth_and_sum(stack, kernels);
      const double integral = sum_sq(f) * texel * texel;
      CHECK(integral == doctest::Approx(a * a * kPi * r * r / 8.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("sliding-sum smoothing matches direct convolution") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int nx = 41;
  const int ny = 29;
  for (double support : {1.0, 1.7, 3.0, 6.25, 13.9}) {
    std::vector<double> layer(static_cast<std::size_t>(nx * ny));
    for (auto& v : layer) v = u(rng);
    auto direct = layer;
    const SmoothingKernel k = make_kernel(support, 1.0, AmplitudeConvention::kEnergy, 1.0);
    smooth_layer(layer, nx, ny, k, SmoothingMethod::kSlidingSum);
    smooth_layer(direct, nx, ny, k, SmoothingMethod::kDirect);
    double err = 0.0;
    for (std::size_t i = 0; i < layer.size(); ++i) err = std::max(err, std::abs(layer[i] - direct[i]));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("kernel wider than the grid is rejected") {
  std::vector<double> layer(10 * 10, 0.0);
  const SmoothingKernel k = make_kernel(8.0, 1.0, AmplitudeConvention::kPeak, 1.0);
  CHECK_THROWS_AS(smooth_layer(layer, 10, 10, k), ConfigError);
  LayerStack stack = make_layer_stack(PatchRegion{{0, 0}, 10, 10, 1}, 10, 1);
  CHECK_THROWS_AS(smooth_and_sum(stack, {k}), ConfigError);
  CHECK_THROWS_AS(smooth_and_sum(stack, {}), ConfigError);
}

TEST_CASE("bilinear splat conserves amplitude and counts clamped particles") {
  LayerStack stack = make_layer_stack(kPatch, 64, 2);
  std::vector<WaveParticle> ps = {particle_at({10.3, 20.8}, 1.0, 0), particle_at({40.9, 5.1}, -2.0, 1),
                                  particle_at({0.2, 30.0}, 1.0, 0),  // half outside the first texel row
                                  particle_at({-50.0, 30.0}, 1.0, 1)};
  accumulate(ps, stack);
  const double s0 = std::accumulate(stack.layers[0].begin(), stack.layers[0].end(), 0.0);
  const double s1 = std::accumulate(stack.layers[1].begin(), stack.layers[1].end(), 0.0);
  CHECK(s1 == doctest::Approx(-2.0));
  CHECK(s0 < 2.0);
  CHECK(s0 > 1.5);
  CHECK(stack.clamped_splats == 2);
  clear(stack);
  CHECK(stack.clamped_splats == 0);
  CHECK(std::accumulate(stack.layers[0].begin(), stack.layers[0].end(), 0.0) == 0.0);

  ParticlePool pool(2);
  pool.add(particle_at({10.3, 20.8}, 1.0, 0));
  pool.add(particle_at({10.3, 20.8}, 3.0, 1));
  accumulate(pool, stack);
  CHECK(std::accumulate(stack.layers[1].begin(), stack.layers[1].end(), 0.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(accumulate(std::vector<WaveParticle>{particle_at({1, 1}, 1.0, 7)}, stack), ConfigError);
}

TEST_CASE("layers sum with their own kernels") {
  LayerStack stack = make_layer_stack(kPatch, 64, 2);
  const std::vector<SmoothingKernel> kernels = {make_kernel(3.0, 1.0, AmplitudeConvention::kPeak, 1.0),
                                                make_kernel(6.0, 1.0, AmplitudeConvention::kPeak, 1.0)};
  accumulate(std::vector<WaveParticle>{particle_at({20.5, 20.5}, 1.0, 0), particle_at({20.5, 20.5}, 0.5, 1)}, stack);
  const HeightField f = smooth_and_sum(stack, kernels);
  CHECK(f.h(20, 20) == doctest::Approx(1.5));
  CHECK(f.h(24, 20) == doctest::Approx(0.5 * 0.5 * (1.0 + std::cos(kPi * 4.0 / 6.0))));
  CHECK_FALSE(f.periodic);
}

TEST_CASE("finish_field derives normals and choppy displacement from the slope") {
  HeightField f(16, 16, {0.0, 0.0}, 0.5);
  for (int j = 0; j < 16; ++j) {
    for (int i = 0; i < 16; ++i) f.h(i, j) = 0.1 * i * 0.5 - 0.05 * j * 0.5;
  }
  finish_field(f, 1.5, 2.0);
  for (std::size_t i = 0; i < f.height.size(); ++i) {
    CHECK(f.displacement[i].x == doctest::Approx(-1.5 * 0.1 * 2.0));
    CHECK(f.displacement[i].y == doctest::Approx(1.5 * 0.05 * 2.0));
    CHECK(length(f.normal[i]) == doctest::Approx(1.0));
    CHECK(f.normal[i].z > 0.0);
  }
}
