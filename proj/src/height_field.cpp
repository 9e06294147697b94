#include "hocean/height_field.h"

#include <algorithm>
#include <cmath>

namespace hocean {

namespace {

struct Bilinear {
  int i0, i1, j0, j1;
  double fx, fy;
};

int wrap_index(long i, int n) {
  long m = i % n;
  if (m < 0) m += n;
  return static_cast<int>(m);
}

Bilinear locate(const HeightField& f, Vec2 world) {
  const double u = (world.x - f.origin.x) / f.spacing;
  const double v = (world.y - f.origin.y) / f.spacing;
  Bilinear b{};
  if (f.periodic) {
    const double fu = std::floor(u);
    const double fv = std::floor(v);
    b.fx = u - fu;
    b.fy = v - fv;
    b.i0 = wrap_index(static_cast<long>(fu), f.nx);
    b.j0 = wrap_index(static_cast<long>(fv), f.ny);
    b.i1 = (b.i0 + 1) % f.nx;
    b.j1 = (b.j0 + 1) % f.ny;
    return b;
  }
  const double cu = std::clamp(u, 0.0, static_cast<double>(f.nx - 1));
  const double cv = std::clamp(v, 0.0, static_cast<double>(f.ny - 1));
  b.i0 = std::min(static_cast<int>(cu), std::max(f.nx - 2, 0));
  b.j0 = std::min(static_cast<int>(cv), std::max(f.ny - 2, 0));
  b.i1 = std::min(b.i0 + 1, f.nx - 1);
  b.j1 = std::min(b.j0 + 1, f.ny - 1);
  b.fx = cu - b.i0;
  b.fy = cv - b.j0;
  return b;
}

}  // namespace

HeightField::HeightField(int nx_, int ny_, Vec2 origin_, double spacing_, bool periodic_)
    : nx(nx_), ny(ny_), origin(origin_), spacing(spacing_), periodic(periodic_) {
  const auto n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  height.assign(n, 0.0);
  displacement.assign(n, Vec2{});
  normal.assign(n, Vec3{0.0, 0.0, 1.0});
}

double HeightField::sample_height(Vec2 world) const {
  const Bilinear b = locate(*this, world);
  const double h00 = h(b.i0, b.j0);
  const double h10 = h(b.i1, b.j0);
  const double h01 = h(b.i0, b.j1);
  const double h11 = h(b.i1, b.j1);
  return (1.0 - b.fy) * ((1.0 - b.fx) * h00 + b.fx * h10) + b.fy * ((1.0 - b.fx) * h01 + b.fx * h11);
}

Vec3 HeightField::sample_normal(Vec2 world) const {
  const Bilinear b = locate(*this, world);
  const Vec3 n00 = normal[index(b.i0, b.j0)];
  const Vec3 n10 = normal[index(b.i1, b.j0)];
  const Vec3 n01 = normal[index(b.i0, b.j1)];
  const Vec3 n11 = normal[index(b.i1, b.j1)];
  return normalized((n00 * (1.0 - b.fx) + n10 * b.fx) * (1.0 - b.fy) +
                    (n01 * (1.0 - b.fx) + n11 * b.fx) * b.fy);
}

double HeightField::mean_height() const {
  if (height.empty()) return 0.0;
  double s = 0.0;
  for (double v : height) s += v;
  return s / static_cast<double>(height.size());
}

double HeightField::variance() const {
  if (height.empty()) return 0.0;
  const double m = mean_height();
  double s = 0.0;
  for (double v : height) s += (v - m) * (v - m);
  return s / static_cast<double>(height.size());
}

void compute_normals(HeightField& f, bool wrap) {
  const double inv2h = 1.0 / (2.0 * f.spacing);
  const double invh = 1.0 / f.spacing;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      double dhdx = 0.0;
      double dhdy = 0.0;
      if (f.nx > 1) {
        if (wrap) {
          dhdx = (f.h((i + 1) % f.nx, j) - f.h((i + f.nx - 1) % f.nx, j)) * inv2h;
        } else if (i == 0) {
          dhdx = (f.h(1, j) - f.h(0, j)) * invh;
        } else if (i == f.nx - 1) {
          dhdx = (f.h(i, j) - f.h(i - 1, j)) * invh;
        } else {
          dhdx = (f.h(i + 1, j) - f.h(i - 1, j)) * inv2h;
        }
      }
      if (f.ny > 1) {
        if (wrap) {
          dhdy = (f.h(i, (j + 1) % f.ny) - f.h(i, (j + f.ny - 1) % f.ny)) * inv2h;
        } else if (j == 0) {
          dhdy = (f.h(i, 1) - f.h(i, 0)) * invh;
        } else if (j == f.ny - 1) {
          dhdy = (f.h(i, j) - f.h(i, j - 1)) * invh;
        } else {
          dhdy = (f.h(i, j + 1) - f.h(i, j - 1)) * inv2h;
        }
      }
      f.normal[f.index(i, j)] = normalized(Vec3{-dhdx, -dhdy, 1.0});
    }
  }
}

}  // namespace hocean
