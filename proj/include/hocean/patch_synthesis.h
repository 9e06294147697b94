/**
 * @file patch_synthesis.h
 * @brief Particles -> layered splats -> separable smoothing -> patch height field.
 *
 * Each bucket owns one layer. Particles splat their signed amplitude
 * bilinearly into their layer; the layer is then smoothed along x and y by a
 * raised-cosine kernel whose half-width is the bucket's particle radius, and
 * the scaled layers are summed.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hocean/height_field.h"
#include "hocean/particles.h"
#include "hocean/spectrum.h"

namespace hocean {

/// How a splatted amplitude maps to surface height.
enum class AmplitudeConvention {
  kEnergy,  ///< a crest/trough pair holds A^2 pi r^2 / 8 of integrated h^2 (matches particle_energy)
  kPeak,    ///< an isolated crest of amplitude A peaks at exactly A
};

enum class SmoothingMethod {
  kSlidingSum,  ///< O(1) per texel running sums
  kDirect,      ///< O(kernel width) per texel reference
};

/// Texel geometry of a patch: texel (i, j) is centered at origin + (i, j) * texel.
struct PatchGrid {
  int nx = 0;
  int ny = 0;
  double texel = 1.0;
  Vec2 origin;
};

/// `resolution` texels along x; y gets round(resolution * l2 / l1) so texels stay square.
PatchGrid patch_grid(const PatchRegion& patch, int resolution);

struct LayerStack {
  PatchGrid grid;
  std::vector<std::vector<double>> layers;
  std::size_t clamped_splats = 0;  ///< particles with part of their splat outside the grid

  std::size_t texel_count() const {
    return static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny);
  }
};

LayerStack make_layer_stack(const PatchRegion& patch, int resolution, std::size_t n_layers);
void clear(LayerStack& stack);

struct SmoothingKernel {
  std::vector<double> taps;     ///< normalized (sum 1), symmetric, odd length
  double support = 0.0;         ///< particle radius in texels
  double peak_scale = 1.0;      ///< applied to the smoothed layer before summation

  int half_width() const { return static_cast<int>(taps.size() / 2); }
};

/// Raised cosine 0.5 (1 + cos(pi m / R)) for |m| < R, R = radius / texel.
SmoothingKernel make_kernel(double radius, double texel, AmplitudeConvention convention,
                            double trough_ratio);
std::vector<SmoothingKernel> build_kernels(const BucketTable& table, double texel,
                                           AmplitudeConvention convention, double trough_ratio);

/// Bilinear splat of every particle into its bucket's layer (layers are not cleared).
void accumulate(const ParticlePool& pool, LayerStack& stack);
void accumulate(std::span<const WaveParticle> particles, LayerStack& stack);

/// Separable x-then-y smoothing of one layer with zero padding.
/// Throws ConfigError if the kernel is wider than the grid.
void smooth_layer(std::vector<double>& layer, int nx, int ny, const SmoothingKernel& kernel,
                  SmoothingMethod method = SmoothingMethod::kSlidingSum);

/// Smooths every layer in place and sums them (scaled) into a height grid.
HeightField smooth_and_sum(LayerStack& stack, const std::vector<SmoothingKernel>& kernels,
                           SmoothingMethod method = SmoothingMethod::kSlidingSum);

/// Normals from central differences with clamped borders; horizontal
/// displacement -choppiness * grad(h) * mean_radius.
void finish_field(HeightField& field, double choppiness, double mean_radius);

}  // namespace hocean
