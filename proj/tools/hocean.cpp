// hocean: headless runs, throughput matrix and live viewer stream.

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "hocean/benchmark.h"
#include "hocean/config.h"
#include "hocean/error.h"
#include "hocean/frame_io.h"
#include "hocean/simulation.h"
#include "hocean/stream_server.h"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

struct CommonOptions {
  std::vector<std::string> overrides;
  std::string seed;
  std::string frames;
  std::string output_dir;
  std::string mode;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--seed", o.seed, "RNG seed");
  app->add_option("--frames", o.frames, "Number of frames (serve: 0 runs until interrupted)");
  app->add_option("--output-dir", o.output_dir, "Output directory");
  app->add_option("--mode", o.mode, "hybrid | fft-only | wp-only")
      ->check(CLI::IsMember({"hybrid", "fft-only", "wp-only"}));
  app->add_option("--set", o.overrides, "Override a config key (key=value), repeatable");
}

void apply_common(hocean::KeyValues& kv, const CommonOptions& o) {
  for (const auto& s : o.overrides) hocean::apply_override(kv, s);
  if (!o.seed.empty()) kv["sim.seed"] = o.seed;
  if (!o.frames.empty()) kv["sim.frames"] = o.frames;
  if (!o.output_dir.empty()) kv["output.dir"] = o.output_dir;
  if (!o.mode.empty()) kv["sim.mode"] = o.mode;
}

int cmd_run(const std::string& path, const CommonOptions& o) {
  hocean::KeyValues kv = hocean::load_key_values(path);
  apply_common(kv, o);
  const hocean::SimConfig config = hocean::build_config(kv);
  const auto summary = hocean::run(config, &std::cerr);
  std::cout << "wrote " << summary.frames << " frames to " << config.output_dir << " in "
            << hocean::format_number(summary.seconds) << " s\n";
  return 0;
}

int cmd_bench(const std::string& path, const CommonOptions& o, const std::string& csv, int warmup, int measure,
              bool interleave) {
  hocean::BenchMatrix m = hocean::load_bench_matrix(path);
  for (const auto& s : o.overrides) hocean::apply_override(m.base, s);
  if (!o.seed.empty()) m.base["sim.seed"] = o.seed;
  if (warmup >= 0) m.warmup = warmup;
  if (measure > 0) m.measure = measure;
  std::vector<hocean::BenchResult> results;
  if (interleave) {
    std::vector<std::pair<std::string, hocean::SimConfig>> cases;
    for (const auto& c : m.cases) {
      hocean::KeyValues kv = m.base;
      for (const auto& ov : c.overrides) hocean::apply_override(kv, ov);
      cases.emplace_back(c.name, hocean::build_config(kv));
    }
    results = hocean::run_bench_interleaved(cases, m.warmup, m.measure);
  } else {
    results = hocean::run_bench(m, &std::cerr);
  }
  std::cout << hocean::format_bench_table(results);
  if (!csv.empty()) hocean::write_bench_csv(csv, results);
  return 0;
}

int cmd_serve(const std::string& path, const CommonOptions& o, int port, bool fast) {
  hocean::KeyValues kv = hocean::load_key_values(path);
  apply_common(kv, o);
  if (port >= 0) kv["stream.port"] = std::to_string(port);
  if (o.frames.empty()) kv["sim.frames"] = "0";
  const hocean::SimConfig config = hocean::build_config(kv);

  hocean::Simulation sim(config);
  hocean::StreamServer server;
  const int bound = server.start(config.stream_port, "0.0.0.0");
  std::cerr << "serving on port " << bound << "\n";

  const double publish_every = 1.0 / config.stream_rate_hz;
  double next_publish = 0.0;
  const auto dt = std::chrono::duration<double>(config.dt);
  auto deadline = std::chrono::steady_clock::now();
  for (long f = 0; !g_stop.load() && (config.frames == 0 || f < config.frames); ++f) {
    for (const auto& in : server.take_inputs()) sim.set_input(in.id, in.thrust, in.rudder);
    sim.step();
    if (sim.time() + 1e-9 >= next_publish) {
      const auto snap = sim.snapshot(config.stream_res, config.output_origin, config.output_size);
      server.publish(hocean::encode_frame_message(snap));
      next_publish += publish_every;
    }
    if (!fast) {
      deadline += std::chrono::duration_cast<std::chrono::steady_clock::duration>(dt);
      std::this_thread::sleep_until(deadline);
    }
  }
  server.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid FFT / wave-particle ocean simulation"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string run_cfg;
  auto* run = app.add_subcommand("run", "Headless run writing frames and stats");
  run->add_option("config", run_cfg, "Config file")->required()->check(CLI::ExistingFile);
  add_common(run, run_opts);

  CommonOptions bench_opts;
  std::string bench_matrix;
  std::string bench_csv;
  int bench_warmup = -1;
  int bench_measure = 0;
  bool bench_interleave = false;
  auto* bench = app.add_subcommand("bench", "Throughput matrix");
  bench->add_option("matrix", bench_matrix, "Matrix file")->required()->check(CLI::ExistingFile);
  bench->add_option("--csv", bench_csv, "Write results as CSV");
  bench->add_option("--warmup", bench_warmup, "Override warm-up frames");
  bench->add_option("--measure", bench_measure, "Override measured frames");
  bench->add_option("--seed", bench_opts.seed, "RNG seed");
  bench->add_flag("--interleave", bench_interleave, "Step all cases round-robin (all held in memory at once)");
  bench->add_option("--set", bench_opts.overrides, "Override a base config key (key=value), repeatable");

  CommonOptions serve_opts;
  std::string serve_cfg;
  int serve_port = -1;
  bool serve_fast = false;
  auto* serve = app.add_subcommand("serve", "Run live and stream frames to viewers");
  serve->add_option("config", serve_cfg, "Config file")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", serve_port, "TCP port (0 picks a free one)");
  serve->add_flag("--fast", serve_fast, "Do not pace frames to real time");
  add_common(serve, serve_opts);

  CLI11_PARSE(app, argc, argv);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  try {
    if (*run) return cmd_run(run_cfg, run_opts);
    if (*bench) return cmd_bench(bench_matrix, bench_opts, bench_csv, bench_warmup, bench_measure, bench_interleave);
    if (*serve) return cmd_serve(serve_cfg, serve_opts, serve_port, serve_fast);
  } catch (const hocean::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
