/**
 * @file simulation.h
 * @brief Per-frame pipeline: FFT -> inject -> advect -> bodies -> patch synthesis -> blend -> output.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "hocean/config.h"
#include "hocean/coupling.h"
#include "hocean/fft_background.h"
#include "hocean/interaction.h"
#include "hocean/particles.h"
#include "hocean/patch_synthesis.h"
#include "hocean/wire.h"

namespace hocean {

struct StageTimes {
  double fft = 0.0;
  double inject = 0.0;
  double advect = 0.0;
  double interact = 0.0;
  double synth = 0.0;
  double blend = 0.0;
  double output = 0.0;
  double total = 0.0;  ///< ms
};

struct FrameStats {
  long frame = 0;
  double t = 0.0;
  StageTimes ms;
  std::size_t particles = 0;
  std::size_t clamped_splats = 0;
  std::size_t emitted_particles = 0;  ///< this frame
  std::vector<std::size_t> count;     ///< per bucket, all patches
  std::vector<double> injected_energy;   ///< cumulative per bucket (J)
  std::vector<double> despawned_energy;  ///< cumulative per bucket (J)
  std::vector<double> emitted_energy;    ///< cumulative per bucket (J)
  double patch_variance = 0.0;  ///< over patch texels deeper than the margin (m^2)
  double fft_variance = 0.0;    ///< FFT tile variance (m^2)
  double band_variance = 0.0;   ///< spectrum integral over the bucketed band (m^2)
  std::vector<BodyState> bodies;
};

struct PatchState {
  PatchSpec spec;
  PatchRegion region;        ///< current placement
  PatchRegion field_region;  ///< placement the current field was synthesized for
  ParticlePool pool;
  InjectionLedger ledger;
  std::vector<SmoothingKernel> kernels;
  HeightField field;
  std::mt19937_64 rng;
  double texel = 0.0;
};

class Simulation {
 public:
  explicit Simulation(SimConfig config);

  /// Advances one frame of dt.
  void step();

  long frame() const { return frame_; }
  /// Time of the most recently completed frame.
  double time() const { return time_; }
  const SimConfig& config() const { return config_; }
  const BucketTable& table() const { return table_; }
  const DirectionalSpectrum& spectrum() const { return spectrum_; }
  const std::vector<PatchState>& patches() const { return patches_; }
  std::vector<FloatingBody>& bodies() { return bodies_; }
  const std::vector<FloatingBody>& bodies() const { return bodies_; }
  const HeightField* fft_field() const { return has_fft_ ? &fft_field_ : nullptr; }
  const FftState* fft_state() const { return has_fft_ ? &fft_state_ : nullptr; }
  const FrameStats& stats() const { return stats_; }
  std::size_t particle_count() const;

  std::vector<PatchView> patch_views() const;
  SurfaceSample query(Vec2 world) const;
  HeightField sample_output(int resolution, Vec2 origin, double size) const;
  FrameSnapshot snapshot(int resolution, Vec2 origin, double size) const;

  /// Sets a body's steering; false if no body has that id.
  bool set_input(int body_id, double thrust, double rudder);

 private:
  void synthesize_patches();
  void recenter_patches();
  void interact(double t);
  void collect_stats(const StageTimes& times);

  SimConfig config_;
  DirectionalSpectrum spectrum_;
  BucketTable table_;
  ParticleOptions particle_options_;
  bool has_fft_ = false;
  FftState fft_state_;
  HeightField fft_field_;
  HeightField fft_prev_;
  std::vector<PatchState> patches_;
  std::vector<FloatingBody> bodies_;
  LayerStack scratch_;
  FrameStats stats_;
  long frame_ = 0;
  double time_ = 0.0;
};

/// Patch list actually simulated for a config (wp-only tiles the FFT domain, fft-only has none).
std::vector<PatchSpec> effective_patches(const SimConfig& config);

std::vector<std::string> stats_header(const SimConfig& config, std::size_t n_buckets);
std::vector<std::string> stats_row(const FrameStats& stats);
std::vector<std::string> timing_header();
std::vector<std::string> timing_row(const FrameStats& stats);

struct RunSummary {
  long frames = 0;
  double seconds = 0.0;
};

/// Headless run: writes config_echo.cfg, stats.csv, timing.csv and frame files
/// into config.output_dir. Progress lines go to `log` when non-null.
RunSummary run(const SimConfig& config, std::ostream* log = nullptr);

}  // namespace hocean
