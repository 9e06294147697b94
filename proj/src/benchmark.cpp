#include "hocean/benchmark.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "hocean/error.h"
#include "hocean/frame_io.h"
#include "hocean/simulation.h"

namespace hocean {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size() || x < 0) throw ConfigError(key);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
}

}  // namespace

BenchMatrix parse_bench_matrix(const std::string& text, const std::string& base_dir) {
  BenchMatrix m;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("matrix line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "base") {
      std::filesystem::path p(value);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      KeyValues kv = load_key_values(p.string());
      for (auto& [k, v] : kv) m.base[k] = v;
    } else if (key.rfind("set.", 0) == 0) {
      m.base[key.substr(4)] = value;
    } else if (key == "warmup") {
      m.warmup = to_int(key, value);
    } else if (key == "measure") {
      m.measure = to_int(key, value);
    } else if (key.rfind("case.", 0) == 0) {
      BenchCase c;
      c.name = key.substr(5);
      std::istringstream parts(value);
      std::string part;
      while (std::getline(parts, part, ';')) {
        part = trim(part);
        if (!part.empty()) c.overrides.push_back(part);
      }
      m.cases.push_back(std::move(c));
    } else {
      throw ConfigError(key + ": unknown matrix key");
    }
  }
  if (m.measure < 1) throw ConfigError("measure: must be >= 1");
  return m;
}

BenchMatrix load_bench_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bench_matrix(ss.str(), std::filesystem::path(path).parent_path().string());
}

namespace {

BenchResult summarize(const std::string& name, const SimConfig& config, std::vector<double> ms, double particles) {
  std::sort(ms.begin(), ms.end());
  const std::size_t n = ms.size();
  const double median = n % 2 == 1 ? ms[n / 2] : 0.5 * (ms[n / 2 - 1] + ms[n / 2]);
  BenchResult r;
  r.name = name;
  r.mode = to_string(config.mode);
  r.n_omega = config.n_omega;
  r.n_theta = config.n_theta;
  r.u10 = config.u10;
  r.resolution = config.patches.empty() ? 0 : config.patches.front().resolution;
  r.frames = static_cast<int>(n);
  r.median_ms = median;
  r.fps = median > 0.0 ? 1000.0 / median : 0.0;
  r.mean_particles = n > 0 ? particles / static_cast<double>(n) : 0.0;
  r.particle_updates_per_s = r.mean_particles * r.fps;
  return r;
}

}  // namespace

BenchResult run_bench_case(const std::string& name, SimConfig config, int warmup, int measure) {
  config.write_frames = false;
  Simulation sim(config);
  for (int i = 0; i < warmup; ++i) sim.step();
  std::vector<double> ms;
  ms.reserve(static_cast<std::size_t>(measure));
  double particles = 0.0;
  for (int i = 0; i < measure; ++i) {
    sim.step();
    ms.push_back(sim.stats().ms.total);
    particles += static_cast<double>(sim.stats().particles);
  }
  return summarize(name, config, std::move(ms), particles);
}

std::vector<BenchResult> run_bench_interleaved(const std::vector<std::pair<std::string, SimConfig>>& cases,
                                               int warmup, int measure) {
  std::vector<std::unique_ptr<Simulation>> sims;
  for (const auto& [name, config] : cases) {
    SimConfig c = config;
    c.write_frames = false;
    sims.push_back(std::make_unique<Simulation>(c));
  }
  for (int i = 0; i < warmup; ++i) {
    for (auto& s : sims) s->step();
  }
  std::vector<std::vector<double>> ms(sims.size());
  std::vector<double> particles(sims.size(), 0.0);
  for (int i = 0; i < measure; ++i) {
    for (std::size_t k = 0; k < sims.size(); ++k) {
      sims[k]->step();
      ms[k].push_back(sims[k]->stats().ms.total);
      particles[k] += static_cast<double>(sims[k]->stats().particles);
    }
  }
  std::vector<BenchResult> out;
  for (std::size_t k = 0; k < sims.size(); ++k) {
    out.push_back(summarize(cases[k].first, sims[k]->config(), std::move(ms[k]), particles[k]));
  }
  return out;
}

std::vector<BenchResult> run_bench(const BenchMatrix& matrix, std::ostream* log) {
  std::vector<BenchResult> out;
  for (const auto& c : matrix.cases) {
    KeyValues kv = matrix.base;
    for (const auto& o : c.overrides) apply_override(kv, o);
    const SimConfig config = build_config(kv);
    if (log != nullptr) *log << "bench " << c.name << " ..." << std::flush;
    out.push_back(run_bench_case(c.name, config, matrix.warmup, matrix.measure));
    if (log != nullptr) *log << " " << format_number(out.back().fps) << " fps\n";
  }
  return out;
}

void write_bench_csv(const std::string& path, const std::vector<BenchResult>& results) {
  CsvWriter csv(path, {"case", "mode", "n_omega", "n_theta", "u10", "res", "frames", "median_ms", "fps",
                       "mean_particles", "particle_updates_per_s"});
  for (const auto& r : results) {
    csv.row({r.name, r.mode, std::to_string(r.n_omega), std::to_string(r.n_theta), format_number(r.u10),
             std::to_string(r.resolution), std::to_string(r.frames), format_number(r.median_ms),
             format_number(r.fps), format_number(r.mean_particles), format_number(r.particle_updates_per_s)});
  }
}

std::string format_bench_table(const std::vector<BenchResult>& results) {
  std::ostringstream o;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-18s %-9s %8s %5s %6s %10s %9s %12s\n", "case", "mode", "(Nw,Nt)", "U10", "Res",
                "median_ms", "FPS", "particles");
  o << buf;
  for (const auto& r : results) {
    const std::string nn = "(" + std::to_string(r.n_omega) + "," + std::to_string(r.n_theta) + ")";
    std::snprintf(buf, sizeof buf, "%-18s %-9s %8s %5.1f %6d %10.2f %9.2f %12.0f\n", r.name.c_str(), r.mode.c_str(),
                  nn.c_str(), r.u10, r.resolution, r.median_ms, r.fps, r.mean_particles);
    o << buf;
  }
  return o.str();
}

}  // namespace hocean
