/**
 * @file benchmark.h
 * @brief Throughput matrix: steady-state FPS per configuration case.
 *
 * Matrix file (key = value per line, file order is kept):
 *
 *     base = default.cfg                # optional, relative to the matrix file
 *     set.sim.seed = 7                  # override applied to every case
 *     warmup = 100
 *     measure = 300
 *     case.hybrid_16 = buckets.n_omega=16; buckets.n_theta=16
 *     case.wp_only   = sim.mode=wp-only
 */
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hocean/config.h"

namespace hocean {

struct BenchCase {
  std::string name;
  std::vector<std::string> overrides;  ///< "key=value"
};

struct BenchMatrix {
  KeyValues base;
  int warmup = 100;
  int measure = 300;
  std::vector<BenchCase> cases;
};

BenchMatrix parse_bench_matrix(const std::string& text, const std::string& base_dir = ".");
BenchMatrix load_bench_matrix(const std::string& path);

struct BenchResult {
  std::string name;
  std::string mode;
  int n_omega = 0;
  int n_theta = 0;
  double u10 = 0.0;
  int resolution = 0;
  int frames = 0;
  double median_ms = 0.0;
  double fps = 0.0;  ///< 1000 / median_ms
  double mean_particles = 0.0;
  double particle_updates_per_s = 0.0;  ///< mean_particles * fps
};

/// Prewarmed run of `warmup` + `measure` frames without file output.
BenchResult run_bench_case(const std::string& name, SimConfig config, int warmup, int measure);

/// Steps all cases round-robin, one frame each per round, so slow drifts in
/// machine load hit every case alike. Use for ordering comparisons.
std::vector<BenchResult> run_bench_interleaved(const std::vector<std::pair<std::string, SimConfig>>& cases,
                                               int warmup, int measure);

std::vector<BenchResult> run_bench(const BenchMatrix& matrix, std::ostream* log = nullptr);

void write_bench_csv(const std::string& path, const std::vector<BenchResult>& results);
std::string format_bench_table(const std::vector<BenchResult>& results);

}  // namespace hocean
