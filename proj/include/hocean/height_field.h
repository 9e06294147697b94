#pragma once

#include <cstddef>
#include <vector>

#include "hocean/vec.h"

namespace hocean {

/// Regular grid of surface samples shared by the FFT tile, the patches and
/// the composited output. Texel (i, j) sits at origin + (i, j) * spacing;
/// storage is row-major with i along x.
struct HeightField {
  int nx = 0;
  int ny = 0;
  Vec2 origin;
  double spacing = 1.0;
  bool periodic = false;  ///< wrap-around sampling (FFT tile)
  std::vector<double> height;
  std::vector<Vec2> displacement;
  std::vector<Vec3> normal;

  HeightField() = default;
  HeightField(int nx, int ny, Vec2 origin, double spacing, bool periodic = false);

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  double& h(int i, int j) { return height[index(i, j)]; }
  double h(int i, int j) const { return height[index(i, j)]; }
  Vec2 texel_position(int i, int j) const { return {origin.x + i * spacing, origin.y + j * spacing}; }

  /// Bilinear height; wraps when periodic, clamps to the border otherwise.
  double sample_height(Vec2 world) const;
  /// Bilinear normal, renormalized.
  Vec3 sample_normal(Vec2 world) const;

  double mean_height() const;
  double variance() const;
};

/// Central-difference normals; `wrap` selects periodic borders, otherwise
/// one-sided differences at the edges.
void compute_normals(HeightField& field, bool wrap);

}  // namespace hocean
