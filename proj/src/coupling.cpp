#include "hocean/coupling.h"

#include <algorithm>

#include "hocean/error.h"

namespace hocean {

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

double blend_weight(const PatchRegion& patch, Vec2 world) {
  return smoothstep(patch.inward_depth(world) / patch.margin);
}

BlendMask build_mask(const PatchRegion& patch, int resolution) {
  if (!(patch.margin > 0.0)) throw ConfigError("patch.margin: must be positive");
  BlendMask m;
  m.grid = patch_grid(patch, resolution);
  m.margin = patch.margin;
  m.weight.resize(static_cast<std::size_t>(m.grid.nx) * m.grid.ny);
  for (int j = 0; j < m.grid.ny; ++j) {
    for (int i = 0; i < m.grid.nx; ++i) {
      const Vec2 p{m.grid.origin.x + i * m.grid.texel, m.grid.origin.y + j * m.grid.texel};
      m.weight[static_cast<std::size_t>(j) * m.grid.nx + i] = blend_weight(patch, p);
    }
  }
  return m;
}

void check_patches(std::span<const PatchRegion> patches) {
  for (std::size_t a = 0; a < patches.size(); ++a) {
    for (std::size_t b = a + 1; b < patches.size(); ++b) {
      if (patches[a].overlaps(patches[b])) {
        throw ConfigError("patch." + std::to_string(a) + ": overlaps patch." + std::to_string(b));
      }
    }
  }
}

namespace {

const PatchView* covering(Vec2 world, std::span<const PatchView> patches) {
  for (const auto& p : patches) {
    if (p.region->contains(world)) return &p;
  }
  return nullptr;
}

SurfaceSample blended(Vec2 world, const HeightField* fft, const PatchView* patch) {
  SurfaceSample s;
  if (fft != nullptr) {
    s.height = fft->sample_height(world);
    s.normal = fft->sample_normal(world);
  }
  if (patch == nullptr) return s;
  const double w = blend_weight(*patch->region, world);
  if (w == 0.0) return s;
  s.weight = w;
  const double hp = patch->field->sample_height(world);
  const Vec3 np = patch->field->sample_normal(world);
  s.height = w * hp + (1.0 - w) * s.height;
  s.normal = normalized(np * w + s.normal * (1.0 - w));
  return s;
}

}  // namespace

SurfaceSample query_surface(Vec2 world, const HeightField* fft, std::span<const PatchView> patches,
                            const QueryOptions& options) {
  const PatchView* patch = covering(world, patches);
  SurfaceSample s = blended(world, fft, patch);
  if (!options.recompute_normals) return s;
  double step = options.normal_step;
  if (!(step > 0.0)) {
    step = patch != nullptr ? patch->field->spacing : (fft != nullptr ? fft->spacing : 1.0);
  }
  auto height_at = [&](Vec2 p) { return blended(p, fft, covering(p, patches)).height; };
  const double hx = (height_at({world.x + step, world.y}) - height_at({world.x - step, world.y})) / (2.0 * step);
  const double hy = (height_at({world.x, world.y + step}) - height_at({world.x, world.y - step})) / (2.0 * step);
  s.normal = normalized({-hx, -hy, 1.0});
  return s;
}

HeightField compose(const HeightField* fft, std::span<const PatchView> patches, int nx, int ny, Vec2 origin,
                    double spacing, const QueryOptions& options) {
  HeightField out(nx, ny, origin, spacing, false);
  const long total = static_cast<long>(nx) * ny;
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < total; ++idx) {
    const int i = static_cast<int>(idx % nx);
    const int j = static_cast<int>(idx / nx);
    const SurfaceSample s = query_surface(out.texel_position(i, j), fft, patches, options);
    out.height[static_cast<std::size_t>(idx)] = s.height;
    out.normal[static_cast<std::size_t>(idx)] = s.normal;
  }
  return out;
}

}  // namespace hocean
