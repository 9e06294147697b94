#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hocean/coupling.h"
#include "hocean/error.h"

using namespace hocean;

namespace {

HeightField plane(int n, Vec2 origin, double spacing, double h0, double sx, double sy, bool periodic) {
  HeightField f(n, n, origin, spacing, periodic);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 p = f.texel_position(i, j);
      f.h(i, j) = h0 + sx * p.x + sy * p.y;
    }
  }
  compute_normals(f, false);
  return f;
}

}  // namespace

TEST_CASE("smoothstep") {
  CHECK(smoothstep(-1.0) == 0.0);
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(0.5) == doctest::Approx(0.5));
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(3.0) == 1.0);
  // Zero slope at both ends.
  const double e = 1e-6;
  CHECK(smoothstep(e) / e < 1e-5);
  CHECK((1.0 - smoothstep(1.0 - e)) / e < 1e-5);
}

TEST_CASE("blend weight ramps across the margin band") {
  const PatchRegion p{{0.0, 0.0}, 100.0, 100.0, 10.0};
  CHECK(blend_weight(p, {-5.0, 50.0}) == 0.0);
  CHECK(blend_weight(p, {0.0, 50.0}) == 0.0);
  CHECK(blend_weight(p, {5.0, 50.0}) == doctest::Approx(0.5));
  CHECK(blend_weight(p, {10.0, 50.0}) == 1.0);
  CHECK(blend_weight(p, {50.0, 50.0}) == 1.0);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double w = blend_weight(p, {0.1 * i, 50.0});
    CHECK(w >= prev);
    prev = w;
  }
  const BlendMask m = build_mask(p, 100);
  CHECK(m.at(0, 50) == doctest::Approx(smoothstep(0.05)));
  CHECK(m.at(50, 50) == 1.0);
  CHECK(m.at(99, 99) == doctest::Approx(smoothstep(0.05)));
}

TEST_CASE("overlapping patches are rejected") {
  const std::vector<PatchRegion> ok = {{{0, 0}, 50, 50, 5}, {{60, 0}, 50, 50, 5}};
  CHECK_NOTHROW(check_patches(ok));
  const std::vector<PatchRegion> bad = {{{0, 0}, 50, 50, 5}, {{60, 0}, 50, 50, 5}, {{40, 40}, 30, 30, 5}};
  try {
    check_patches(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "patch.0: overlaps patch.2");
  }
}

TEST_CASE("query blends patch over background and is continuous at the boundary") {
  const PatchRegion region{{100.0, 100.0}, 50.0, 50.0, 10.0};
  const HeightField fft = plane(64, {0.0, 0.0}, 4.0, 1.0, 0.0, 0.0, true);
  const HeightField patch = plane(100, {100.25, 100.25}, 0.5, 3.0, 0.0, 0.0, false);
  const std::vector<PatchView> views = {{&region, &patch}};

  CHECK(query_surface({50.0, 50.0}, &fft, views).height == doctest::Approx(1.0));
  CHECK(query_surface({50.0, 50.0}, &fft, views).weight == 0.0);
  CHECK(query_surface({125.0, 125.0}, &fft, views).height == doctest::Approx(3.0));
  CHECK(query_surface({105.0, 125.0}, &fft, views).height == doctest::Approx(2.0));

  // Fine scan across the west boundary: no step larger than the ramp's slope allows.
  double prev = query_surface({99.0, 125.0}, &fft, views).height;
  double max_step = 0.0;
  const double dx = 0.01;
  for (int i = 1; i <= 1200; ++i) {
    const double h = query_surface({99.0 + i * dx, 125.0}, &fft, views).height;
    max_step = std::max(max_step, std::abs(h - prev));
    prev = h;
  }
  // Max slope of the ramp is 1.5 * (3 - 1) / margin.
  CHECK(max_step <= 1.5 * 2.0 / 10.0 * dx * 1.0001);

  // Without a background the far field is flat zero.
  CHECK(query_surface({50.0, 50.0}, nullptr, views).height == 0.0);
  CHECK(query_surface({125.0, 125.0}, nullptr, views).height == doctest::Approx(3.0));
}

TEST_CASE("recomputed normals follow the blended height") {
  const PatchRegion region{{0.0, 0.0}, 50.0, 50.0, 10.0};
  const HeightField fft = plane(32, {0.0, 0.0}, 4.0, 0.0, 0.0, 0.0, true);
  const HeightField patch = plane(100, {0.25, 0.25}, 0.5, 0.0, 0.2, -0.1, false);
  const std::vector<PatchView> views = {{&region, &patch}};
  QueryOptions opt;
  opt.recompute_normals = true;
  const SurfaceSample s = query_surface({25.0, 25.0}, &fft, views, opt);
  const Vec3 expected = normalized({-0.2, 0.1, 1.0});
  CHECK(s.normal.x == doctest::Approx(expected.x));
  CHECK(s.normal.y == doctest::Approx(expected.y));
  CHECK(s.normal.z == doctest::Approx(expected.z));
  const SurfaceSample b = query_surface({25.0, 25.0}, &fft, views);
  CHECK(b.normal.x == doctest::Approx(expected.x));
}

TEST_CASE("compose samples the query on a grid") {
  const PatchRegion region{{20.0, 20.0}, 40.0, 40.0, 5.0};
  const HeightField fft = plane(32, {0.0, 0.0}, 4.0, -1.0, 0.0, 0.0, true);
  const HeightField patch = plane(80, {20.25, 20.25}, 0.5, 2.0, 0.0, 0.0, false);
  const std::vector<PatchView> views = {{&region, &patch}};
  const HeightField out = compose(&fft, views, 40, 40, {0.0, 0.0}, 2.0);
  for (int j = 0; j < 40; ++j) {
    for (int i = 0; i < 40; ++i) {
      CHECK(out.h(i, j) == doctest::Approx(query_surface(out.texel_position(i, j), &fft, views).height));
    }
  }
  CHECK(out.h(0, 0) == doctest::Approx(-1.0));
  CHECK(out.h(20, 20) == doctest::Approx(2.0));
}
