/**
 * @file coupling.h
 * @brief Near/far compositing: patch fields cross-fade into the FFT background.
 */
#pragma once

#include <span>
#include <vector>

#include "hocean/height_field.h"
#include "hocean/particles.h"
#include "hocean/patch_synthesis.h"

namespace hocean {

/// 3t^2 - 2t^3 on [0, 1], clamped outside.
double smoothstep(double t);

/// smoothstep(inward depth / margin): 0 on and outside the boundary, 1 deeper than the margin.
double blend_weight(const PatchRegion& patch, Vec2 world);

struct BlendMask {
  PatchGrid grid;
  double margin = 0.0;
  std::vector<double> weight;

  double at(int i, int j) const { return weight[static_cast<std::size_t>(j) * grid.nx + i]; }
};

BlendMask build_mask(const PatchRegion& patch, int resolution);

/// Throws ConfigError if any two patches overlap.
void check_patches(std::span<const PatchRegion> patches);

/// A patch region together with this frame's synthesized field.
struct PatchView {
  const PatchRegion* region = nullptr;
  const HeightField* field = nullptr;
};

struct SurfaceSample {
  double height = 0.0;
  Vec3 normal{0.0, 0.0, 1.0};
  double weight = 0.0;  ///< patch weight that was applied
};

struct QueryOptions {
  bool recompute_normals = false;  ///< central differences of the blended height instead of blended normals
  double normal_step = 0.0;        ///< difference step for recompute (0: the covering field's spacing)
};

/// Blended surface at a world position. `fft` may be null (no background).
SurfaceSample query_surface(Vec2 world, const HeightField* fft, std::span<const PatchView> patches,
                            const QueryOptions& options = {});

/// Samples query_surface on a regular grid (heights and normals).
HeightField compose(const HeightField* fft, std::span<const PatchView> patches, int nx, int ny, Vec2 origin,
                    double spacing, const QueryOptions& options = {});

}  // namespace hocean
