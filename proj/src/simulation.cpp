#include "hocean/simulation.h"

#include <chrono>
#include <cmath>
#include <ostream>

#include "hocean/error.h"
#include "hocean/frame_io.h"

namespace hocean {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t patch_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x9e3779b9u};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double interior_variance(const PatchState& p) {
  const HeightField& f = p.field;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      if (p.field_region.inward_depth(f.texel_position(i, j)) < p.field_region.margin) continue;
      const double h = f.h(i, j);
      sum += h;
      sum_sq += h * h;
      ++n;
    }
  }
  if (n == 0) return 0.0;
  const double mean = sum / static_cast<double>(n);
  return sum_sq / static_cast<double>(n) - mean * mean;
}

}  // namespace

std::vector<PatchSpec> effective_patches(const SimConfig& config) {
  switch (config.mode) {
    case SimMode::kFftOnly:
      return {};
    case SimMode::kHybrid:
      return config.patches;
    case SimMode::kWpOnly: {
      PatchSpec base = config.patches.empty() ? PatchSpec{} : config.patches.front();
      const double tile = config.fft_domain / config.wp_tiles;
      // Keep the texel density of the configured patch.
      const double texel = base.region.l1 / base.resolution;
      std::vector<PatchSpec> tiles;
      for (int j = 0; j < config.wp_tiles; ++j) {
        for (int i = 0; i < config.wp_tiles; ++i) {
          PatchSpec t = base;
          t.region.origin = {i * tile, j * tile};
          t.region.l1 = tile;
          t.region.l2 = tile;
          t.resolution = std::max(8, static_cast<int>(std::lround(tile / texel)));
          t.follow_body = -1;
          tiles.push_back(t);
        }
      }
      return tiles;
    }
  }
  return {};
}

Simulation::Simulation(SimConfig config) : config_(std::move(config)) {
  validate(config_);
  spectrum_ = directional_spectrum(config_);
  table_ = build_buckets(spectrum_.params, config_.n_omega, config_.n_theta, config_.bucket_frequency);
  particle_options_.rho = config_.rho;
  particle_options_.trough_ratio = config_.trough_ratio;

  for (std::size_t i = 0; i < config_.bodies.size(); ++i) {
    BodySpec spec = config_.bodies[i];
    spec.id = static_cast<int>(i);
    bodies_.push_back(make_body(spec, config_.rho, config_.g));
  }

  if (config_.mode != SimMode::kWpOnly) {
    has_fft_ = true;
    fft_state_ = init_fft(spectrum_, config_.fft_n, config_.fft_domain, config_.fft_seed.value_or(config_.seed),
                          config_.fft_choppiness);
    fft_field_ = evolve_and_synthesize(fft_state_, 0.0);
  }

  const auto specs = effective_patches(config_);
  patches_.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    PatchState p;
    p.spec = specs[i];
    p.region = specs[i].region;
    p.field_region = p.region;
    p.pool = ParticlePool(table_.size());
    p.ledger = InjectionLedger(table_.size());
    p.rng.seed(patch_seed(config_.seed, i));
    const PatchGrid grid = patch_grid(p.region, p.spec.resolution);
    p.texel = grid.texel;
    p.kernels = build_kernels(table_, grid.texel, config_.convention, config_.trough_ratio);
    patches_.push_back(std::move(p));
  }
  recenter_patches();
  for (auto& p : patches_) {
    if (config_.prewarm) {
      prewarm(p.pool, p.region, table_, spectrum_, p.ledger, config_.dt, 0.0, p.rng, particle_options_);
    }
  }
  synthesize_patches();

  // Start bodies from their current submersion so the first frame does not
  // register the whole draft as a volume change.
  const SurfaceQuery q = [this](Vec2 x) { return query(x); };
  for (auto& b : bodies_) {
    const BuoyancyReport rep = measure_submersion(b, q);
    b.submerged_volume = rep.submerged_volume;
    b.mean_depth = rep.mean_depth;
    double s = 0.0;
    for (const auto& pr : b.probes) s += q(b.probe_world(pr).xy()).height;
    b.surface_height = s / static_cast<double>(b.probes.size());
  }
  stats_.band_variance = table_.total_energy;
}

std::size_t Simulation::particle_count() const {
  std::size_t n = 0;
  for (const auto& p : patches_) n += p.pool.size();
  return n;
}

std::vector<PatchView> Simulation::patch_views() const {
  std::vector<PatchView> views;
  views.reserve(patches_.size());
  for (const auto& p : patches_) views.push_back({&p.field_region, &p.field});
  return views;
}

SurfaceSample Simulation::query(Vec2 world) const {
  const auto views = patch_views();
  QueryOptions opts;
  opts.recompute_normals = config_.recompute_normals;
  return query_surface(world, fft_field(), views, opts);
}

HeightField Simulation::sample_output(int resolution, Vec2 origin, double size) const {
  const auto views = patch_views();
  QueryOptions opts;
  opts.recompute_normals = config_.recompute_normals;
  return compose(fft_field(), views, resolution, resolution, origin, size / resolution, opts);
}

FrameSnapshot Simulation::snapshot(int resolution, Vec2 origin, double size) const {
  const HeightField f = sample_output(resolution, origin, size);
  FrameSnapshot s;
  s.t = time_;
  s.nx = f.nx;
  s.ny = f.ny;
  s.origin = f.origin;
  s.spacing = f.spacing;
  s.heights = f.height;
  for (const auto& b : bodies_) s.bodies.push_back({b.id, b.position, b.yaw});
  s.particles = static_cast<long>(particle_count());
  return s;
}

bool Simulation::set_input(int body_id, double thrust, double rudder) {
  for (auto& b : bodies_) {
    if (b.id == body_id) {
      b.thrust = std::clamp(thrust, -1.0, 1.0);
      b.rudder = std::clamp(rudder, -1.0, 1.0);
      return true;
    }
  }
  return false;
}

void Simulation::recenter_patches() {
  for (auto& p : patches_) {
    if (p.spec.follow_body < 0) continue;
    const auto& b = bodies_.at(static_cast<std::size_t>(p.spec.follow_body));
    // Snap to the texel lattice so the grid does not swim under the body.
    const double ox = std::round((b.position.x - 0.5 * p.region.l1) / p.texel) * p.texel;
    const double oy = std::round((b.position.y - 0.5 * p.region.l2) / p.texel) * p.texel;
    p.region.origin = {ox, oy};
  }
}

void Simulation::synthesize_patches() {
  for (auto& p : patches_) {
    const PatchGrid grid = patch_grid(p.region, p.spec.resolution);
    if (scratch_.grid.nx != grid.nx || scratch_.grid.ny != grid.ny || scratch_.layers.size() != table_.size()) {
      scratch_ = make_layer_stack(p.region, p.spec.resolution, table_.size());
    } else {
      clear(scratch_);
      scratch_.grid = grid;
    }
    accumulate(p.pool, scratch_);
    p.field = smooth_and_sum(scratch_, p.kernels);
    double mean_radius = 0.0;
    for (const auto& b : table_.buckets) mean_radius += b.radius;
    mean_radius /= static_cast<double>(table_.size());
    finish_field(p.field, config_.patch_choppiness, mean_radius);
    p.field_region = p.region;
    stats_.clamped_splats += scratch_.clamped_splats;
  }
}

void Simulation::interact(double t) {
  if (bodies_.empty()) return;
  // Read-only against the previous frame's fields.
  std::vector<PatchView> views;
  for (const auto& p : patches_) views.push_back({&p.field_region, &p.field});
  const HeightField* fft = has_fft_ ? &fft_prev_ : nullptr;
  QueryOptions opts;
  opts.recompute_normals = config_.recompute_normals;
  const SurfaceQuery q = [&](Vec2 x) { return query_surface(x, fft, views, opts); };

  for (auto& b : bodies_) {
    const double previous_volume = b.submerged_volume;
    const BuoyancyReport rep = buoyancy_step(b, q, config_.dt, config_.rho, config_.g);
    for (auto& p : patches_) {
      if (!p.region.contains(b.position.xy())) continue;
      EmissionResult em = emit_from_motion(b, previous_volume, rep, p.region, table_, config_.dt, config_.rho,
                                           config_.g, t, config_.emission);
      for (const auto& w : em.particles) {
        if (w.role == ParticleRole::kCrest) {
          p.ledger.emitted_energy[w.bucket] += particle_energy(w.amplitude, table_[w.bucket].radius, config_.rho, config_.g);
        }
      }
      stats_.emitted_particles += em.particles.size();
      p.pool.add(em.particles);
      break;
    }
  }
}

void Simulation::step() {
  const auto frame_start = Clock::now();
  StageTimes times;
  const double t = static_cast<double>(frame_) * config_.dt;
  stats_.clamped_splats = 0;
  stats_.emitted_particles = 0;

  auto start = Clock::now();
  if (has_fft_) {
    fft_prev_ = std::move(fft_field_);
    fft_field_ = evolve_and_synthesize(fft_state_, t);
  }
  times.fft = ms_since(start);

  start = Clock::now();
  recenter_patches();
  for (auto& p : patches_) {
    p.pool.add(inject(p.region, table_, spectrum_, p.ledger, config_.dt, t, p.rng, particle_options_));
  }
  times.inject = ms_since(start);

  start = Clock::now();
  for (auto& p : patches_) advect(p.pool, config_.dt, p.region, table_, p.ledger, particle_options_);
  times.advect = ms_since(start);

  start = Clock::now();
  interact(t);
  times.interact = ms_since(start);

  start = Clock::now();
  synthesize_patches();
  times.synth = ms_since(start);

  // Blending is evaluated lazily by queries; this stage only refreshes the views.
  start = Clock::now();
  (void)patch_views();
  times.blend = ms_since(start);

  time_ = t;
  ++frame_;
  times.total = ms_since(frame_start);
  collect_stats(times);
}

void Simulation::collect_stats(const StageTimes& times) {
  FrameStats& s = stats_;
  s.frame = frame_ - 1;
  s.t = time_;
  s.ms = times;
  const std::size_t nb = table_.size();
  s.count.assign(nb, 0);
  s.injected_energy.assign(nb, 0.0);
  s.despawned_energy.assign(nb, 0.0);
  s.emitted_energy.assign(nb, 0.0);
  s.particles = 0;
  for (const auto& p : patches_) {
    for (std::size_t b = 0; b < nb; ++b) {
      s.count[b] += p.pool.bucket(b).size();
      s.injected_energy[b] += p.ledger.injected_energy[b];
      s.despawned_energy[b] += p.ledger.despawned_energy[b];
      s.emitted_energy[b] += p.ledger.emitted_energy[b];
    }
    s.particles += p.pool.size();
  }
  s.patch_variance = patches_.empty() ? 0.0 : interior_variance(patches_.front());
  s.fft_variance = has_fft_ ? fft_field_.variance() : 0.0;
  s.band_variance = table_.total_energy;
  s.bodies.clear();
  for (const auto& b : bodies_) s.bodies.push_back({b.id, b.position, b.yaw});
}

std::vector<std::string> stats_header(const SimConfig& config, std::size_t n_buckets) {
  std::vector<std::string> h = {"frame",          "t",           "particles",    "clamped_splats",
                                "emitted_particles", "patch_variance", "fft_variance", "band_variance"};
  for (std::size_t b = 0; b < n_buckets; ++b) h.push_back("count_" + std::to_string(b));
  for (std::size_t b = 0; b < n_buckets; ++b) h.push_back("injected_J_" + std::to_string(b));
  for (std::size_t b = 0; b < n_buckets; ++b) h.push_back("despawned_J_" + std::to_string(b));
  for (std::size_t b = 0; b < n_buckets; ++b) h.push_back("emitted_J_" + std::to_string(b));
  for (std::size_t i = 0; i < config.bodies.size(); ++i) {
    const std::string pre = "body" + std::to_string(i) + "_";
    for (const char* f : {"x", "y", "z", "yaw"}) h.push_back(pre + f);
  }
  return h;
}

std::vector<std::string> stats_row(const FrameStats& s) {
  std::vector<std::string> r = {std::to_string(s.frame),          format_number(s.t),
                                std::to_string(s.particles),      std::to_string(s.clamped_splats),
                                std::to_string(s.emitted_particles), format_number(s.patch_variance),
                                format_number(s.fft_variance),    format_number(s.band_variance)};
  for (auto c : s.count) r.push_back(std::to_string(c));
  for (auto e : s.injected_energy) r.push_back(format_number(e));
  for (auto e : s.despawned_energy) r.push_back(format_number(e));
  for (auto e : s.emitted_energy) r.push_back(format_number(e));
  for (const auto& b : s.bodies) {
    r.push_back(format_number(b.position.x));
    r.push_back(format_number(b.position.y));
    r.push_back(format_number(b.position.z));
    r.push_back(format_number(b.yaw));
  }
  return r;
}

std::vector<std::string> timing_header() {
  return {"frame", "fft_ms", "inject_ms", "advect_ms", "interact_ms", "synth_ms", "blend_ms", "output_ms", "total_ms"};
}

std::vector<std::string> timing_row(const FrameStats& s) {
  return {std::to_string(s.frame),      format_number(s.ms.fft),      format_number(s.ms.inject),
          format_number(s.ms.advect),   format_number(s.ms.interact), format_number(s.ms.synth),
          format_number(s.ms.blend),    format_number(s.ms.output),   format_number(s.ms.total)};
}

RunSummary run(const SimConfig& config, std::ostream* log) {
  const auto start = Clock::now();
  ensure_directory(config.output_dir);
  write_text_file(config.output_dir + "/config_echo.cfg", echo(config));
  Simulation sim(config);
  CsvWriter stats(config.output_dir + "/stats.csv", stats_header(config, sim.table().size()));
  CsvWriter timing;
  if (config.write_timing) timing = CsvWriter(config.output_dir + "/timing.csv", timing_header());

  RunSummary summary;
  for (int f = 0; f < config.frames; ++f) {
    sim.step();
    FrameStats s = sim.stats();
    const auto out_start = Clock::now();
    if (config.write_frames && s.frame % config.frame_every == 0) {
      const HeightField out = sim.sample_output(config.output_res, config.output_origin, config.output_size);
      write_frame(config.output_dir, s.frame, out, s.t);
    }
    s.ms.output = ms_since(out_start);
    s.ms.total += s.ms.output;
    stats.row(stats_row(s));
    if (timing.is_open()) timing.row(timing_row(s));
    if (log != nullptr && (f + 1) % 60 == 0) {
      *log << "frame " << s.frame << "  particles " << s.particles << "  " << format_number(s.ms.total) << " ms\n";
    }
    ++summary.frames;
  }
  summary.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return summary;
}

}  // namespace hocean
