#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hocean/benchmark.h"
#include "hocean/error.h"
#include "hocean/frame_io.h"
#include "hocean/simulation.h"

using namespace hocean;
namespace fs = std::filesystem;

namespace {

SimConfig small_config(const std::string& extra = "") {
  KeyValues kv = parse_key_values(
      "buckets.n_omega = 6\nbuckets.n_theta = 8\n"
      "fft.n = 64\nfft.domain_size = 200\n"
      "patch.0.origin_x = 70\npatch.0.origin_y = 70\npatch.0.l1 = 60\npatch.0.l2 = 60\n"
      "patch.0.margin = 8\npatch.0.res = 120\n"
      "sim.frames = 4\noutput.resolution = 32\noutput.size = 200\n" +
      extra);
  return build_config(kv);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("hocean_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("frame files round-trip") {
  HeightField f(3, 2, {1.5, -2.0}, 0.25);
  f.height = {0.0, 1.0, -2.5, 3.25, 1e-3, -7.0};
  const fs::path dir = temp_dir("frame_io");
  ensure_directory(dir.string());
  write_frame(dir.string(), 12, f, 0.2);
  CHECK(frame_basename(12) == "frame_000012");
  const auto raw = read_frame_raw((dir / "frame_000012.raw").string());
  REQUIRE(raw.size() == 6);
  for (std::size_t i = 0; i < raw.size(); ++i) CHECK(raw[i] == static_cast<float>(f.height[i]));
  CHECK(fs::file_size(dir / "frame_000012.raw") == 24);
  const FrameMeta m = read_frame_meta((dir / "frame_000012.meta").string());
  CHECK(m.nx == 3);
  CHECK(m.ny == 2);
  CHECK(m.spacing == 0.25);
  CHECK(m.origin.x == 1.5);
  CHECK(m.origin.y == -2.0);
  CHECK(m.t == doctest::Approx(0.2));
  // Little-endian byte order regardless of host.
  const auto bytes = encode_float32_le({1.0});
  CHECK(bytes == std::vector<unsigned char>{0x00, 0x00, 0x80, 0x3f});
  CHECK(decode_float32_le(bytes.data(), bytes.size()) == std::vector<float>{1.0f});
  CHECK_THROWS_AS(read_frame_raw((dir / "missing.raw").string()), IoError);
  fs::remove_all(dir);
}

TEST_CASE("csv writer and number formatting") {
  const fs::path dir = temp_dir("csv");
  fs::create_directories(dir);
  {
    CsvWriter w((dir / "a.csv").string(), {"x", "y"});
    w.row({"1", "2"});
    CHECK_THROWS_AS(w.row({"1"}), IoError);
  }
  CHECK(slurp(dir / "a.csv") == "x,y\n1,2\n");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  fs::remove_all(dir);
}

TEST_CASE("hybrid simulation steps and reports stats") {
  Simulation sim(small_config());
  REQUIRE(sim.patches().size() == 1);
  CHECK(sim.particle_count() > 0);  // prewarmed
  CHECK(sim.fft_field() != nullptr);
  sim.step();
  sim.step();
  CHECK(sim.frame() == 2);
  CHECK(sim.time() == doctest::Approx(sim.config().dt));
  const FrameStats& s = sim.stats();
  CHECK(s.frame == 1);
  CHECK(s.count.size() == 6);
  CHECK(s.particles == sim.particle_count());
  CHECK(s.patch_variance > 0.0);
  CHECK(s.fft_variance > 0.0);
  CHECK(s.band_variance == doctest::Approx(sim.table().total_energy));
  for (double e : s.injected_energy) CHECK(e > 0.0);
  CHECK(stats_row(s).size() == stats_header(sim.config(), 6).size());
  CHECK(timing_row(s).size() == timing_header().size());

  // Far from the patch the surface is the FFT background.
  const Vec2 far{10.0, 10.0};
  CHECK(sim.query(far).height == doctest::Approx(sim.fft_field()->sample_height(far)));
  CHECK(sim.query(far).weight == 0.0);
  CHECK(sim.query({100.0, 100.0}).weight == 1.0);

  const FrameSnapshot snap = sim.snapshot(16, {0.0, 0.0}, 200.0);
  CHECK(snap.nx == 16);
  CHECK(snap.heights.size() == 256);
  CHECK(snap.particles == static_cast<long>(sim.particle_count()));
}

TEST_CASE("fft-only and wp-only modes") {
  Simulation fft(small_config("sim.mode = fft-only\n"));
  CHECK(fft.patches().empty());
  CHECK(fft.particle_count() == 0);
  fft.step();
  CHECK(fft.stats().patch_variance == 0.0);

  Simulation wp(small_config("sim.mode = wp-only\nsim.wp_tiles = 2\nfft.domain_size = 100\n"));
  CHECK(wp.fft_field() == nullptr);
  REQUIRE(wp.patches().size() == 4);
  const auto specs = effective_patches(wp.config());
  CHECK(specs[3].region.origin.x == doctest::Approx(50.0));
  CHECK(specs[3].region.origin.y == doctest::Approx(50.0));
  CHECK(specs[0].region.l1 == doctest::Approx(50.0));
  CHECK(specs[0].resolution == 100);  // same texel density as the configured patch
  wp.step();
  CHECK(wp.particle_count() > 0);
}

TEST_CASE("bodies float, take input, and drag a following patch") {
  Simulation sim(small_config(
      "body.count = 1\nbody.0.x = 100\nbody.0.y = 100\npatch.0.follow_body = 0\n"));
  CHECK(sim.set_input(0, 2.0, -0.5));
  CHECK_FALSE(sim.set_input(5, 1.0, 0.0));
  CHECK(sim.bodies()[0].thrust == 1.0);
  CHECK(sim.bodies()[0].rudder == -0.5);
  const double x0 = sim.patches()[0].region.origin.x;
  for (int i = 0; i < 120; ++i) sim.step();
  const auto& b = sim.bodies()[0];
  CHECK(b.position.x > 101.0);
  CHECK(std::abs(b.position.z) < 1.0);
  CHECK(sim.patches()[0].region.origin.x > x0);
  const auto& r = sim.patches()[0].region;
  CHECK(std::abs(r.center().x - b.position.x) <= sim.patches()[0].texel);
  double emitted = 0.0;
  for (double e : sim.stats().emitted_energy) emitted += e;
  CHECK(emitted > 0.0);
  CHECK(sim.stats().bodies.size() == 1);
}

TEST_CASE("headless run writes outputs and is deterministic") {
  auto run_once = [](const std::string& name) {
    SimConfig c = small_config("body.count = 1\nbody.0.x = 95\nbody.0.y = 100\nbody.0.vx = 1\noutput.every = 2\n");
    c.output_dir = temp_dir(name).string();
    c.write_timing = false;
    const RunSummary s = run(c);
    CHECK(s.frames == 4);
    return fs::path(c.output_dir);
  };
  const fs::path a = run_once("det_a");
  const fs::path b = run_once("det_b");
  for (const char* f : {"stats.csv", "frame_000000.raw", "frame_000000.meta",
                        "frame_000002.raw", "frame_000002.meta"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK_FALSE(fs::exists(a / "frame_000001.raw"));
  CHECK_FALSE(fs::exists(a / "timing.csv"));
  CHECK(fs::file_size(a / "frame_000000.raw") == 32 * 32 * 4);
  // The echoed config reproduces the run's settings.
  const SimConfig echoed = load_config((a / "config_echo.cfg").string());
  CHECK(echoed.patches[0].resolution == 120);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("bench matrix parsing") {
  const BenchMatrix m = parse_bench_matrix(
      "set.sim.seed = 7\nwarmup = 2\nmeasure = 5\n"
      "case.small = buckets.n_omega=8; buckets.n_theta=8\ncase.plain =\n");
  CHECK(m.base.at("sim.seed") == "7");
  CHECK(m.warmup == 2);
  CHECK(m.measure == 5);
  REQUIRE(m.cases.size() == 2);
  CHECK(m.cases[0].name == "small");
  CHECK(m.cases[0].overrides == std::vector<std::string>{"buckets.n_omega=8", "buckets.n_theta=8"});
  CHECK(m.cases[1].overrides.empty());
  CHECK_THROWS_AS(parse_bench_matrix("frobnicate = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_bench_matrix("measure = 0\n"), ConfigError);
  const BenchMatrix shipped = load_bench_matrix(std::string(HOCEAN_SOURCE_DIR) + "/configs/bench.matrix");
  CHECK(shipped.cases.size() == 9);
  CHECK(shipped.base.count("spectrum.u10") == 1);
}

TEST_CASE("benchmark cases report throughput") {
  const auto results = run_bench_interleaved({{"a", small_config()}, {"b", small_config("buckets.n_omega = 4\n")}}, 1, 3);
  REQUIRE(results.size() == 2);
  CHECK(results[0].name == "a");
  CHECK(results[0].frames == 3);
  CHECK(results[0].fps > 0.0);
  CHECK(results[1].n_omega == 4);
  CHECK(results[0].mean_particles > results[1].mean_particles);
  const BenchResult single = run_bench_case("c", small_config(), 0, 2);
  CHECK(single.frames == 2);
  CHECK(format_bench_table(results).find("hybrid") != std::string::npos);
}

TEST_CASE("zero-frame run writes the header and config echo only") {
  SimConfig c = small_config("sim.frames = 0\n");
  c.output_dir = temp_dir("zero").string();
  const RunSummary s = run(c);
  CHECK(s.frames == 0);
  const fs::path d(c.output_dir);
  CHECK(fs::exists(d / "config_echo.cfg"));
  const std::string stats = slurp(d / "stats.csv");
  CHECK(std::count(stats.begin(), stats.end(), '\n') == 1);
  CHECK(stats.rfind("frame,t,particles,", 0) == 0);
  for (const auto& e : fs::directory_iterator(d)) CHECK(e.path().extension() != ".raw");
  fs::remove_all(d);
}

TEST_CASE("energy ledger balances injected, emitted, despawned and resident energy") {
  Simulation sim(small_config("body.count = 1\nbody.0.x = 100\nbody.0.y = 100\nbody.0.thrust = 1\n"));
  for (int i = 0; i < 90; ++i) sim.step();
  const FrameStats& s = sim.stats();
  ParticleOptions opt;
  const auto resident = resident_energy(sim.patches()[0].pool, sim.table(), opt);
  for (std::size_t b = 0; b < sim.table().size(); ++b) {
    const double in = s.injected_energy[b] + s.emitted_energy[b];
    const double out = s.despawned_energy[b] + resident[b];
    CHECK(std::abs(in - out) <= 1e-9 * in);
  }
  // Stage times never exceed the frame total.
  const StageTimes& t = s.ms;
  CHECK(t.fft + t.inject + t.advect + t.interact + t.synth + t.blend <= t.total + 1e-6);
}

TEST_CASE("per-bucket particle counts are stationary after prewarm") {
  Simulation sim(small_config());
  const std::size_t nb = sim.table().size();
  std::vector<double> first(nb, 0.0);
  std::vector<double> second(nb, 0.0);
  const int half = 150;
  for (int f = 0; f < 2 * half; ++f) {
    sim.step();
    auto& acc = f < half ? first : second;
    for (std::size_t b = 0; b < nb; ++b) acc[b] += static_cast<double>(sim.stats().count[b]) / half;
  }
  for (std::size_t b = 0; b < nb; ++b) {
    REQUIRE(first[b] > 0.0);
    CHECK(std::abs(second[b] - first[b]) / first[b] < 0.05);
  }
}

TEST_CASE("fft seed can differ from the particle seed") {
  Simulation a(small_config());
  Simulation b(small_config("fft.seed = 1\n"));
  Simulation c(small_config("fft.seed = 2\n"));
  CHECK(a.fft_state()->h0 == b.fft_state()->h0);
  CHECK(a.fft_state()->h0 != c.fft_state()->h0);
  CHECK(a.particle_count() == c.particle_count());
}
