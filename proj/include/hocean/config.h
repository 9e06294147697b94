/**
 * @file config.h
 * @brief Flat key=value scenario configuration.
 *
 * One `key = value` per line, `#` starts a comment. Keys carry a section
 * prefix (`spectrum.u10 = 5`). Indexed groups use `patch.<i>.<field>` and
 * `body.<i>.<field>` together with `patch.count` / `body.count`.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hocean/interaction.h"
#include "hocean/particles.h"
#include "hocean/patch_synthesis.h"
#include "hocean/spectrum.h"

namespace hocean {

enum class SimMode { kHybrid, kFftOnly, kWpOnly };

std::string to_string(SimMode mode);
SimMode parse_mode(std::string_view text);

struct PatchSpec {
  PatchRegion region;
  int resolution = 512;
  int follow_body = -1;  ///< body id the patch re-centers on each frame, -1 for static
};

struct BodySpec {
  int id = 0;
  Vec3 position;
  double yaw = 0.0;
  Vec3 velocity;
  double length = 4.0;
  double width = 2.0;
  double height = 1.0;
  double density = 500.0;
  int probes_x = 3;
  int probes_y = 3;
  double zeta = 0.2;
  double thrust = 0.0;
  double rudder = 0.0;
};

struct SimConfig {
  // spectrum
  double u10 = 5.0;
  double fetch = 10000.0;
  double g = kStandardGravity;
  double direction = 0.0;
  double sigma_low = 0.07;
  double sigma_high = 0.09;
  BucketFrequency bucket_frequency = BucketFrequency::kMeanValue;
  int n_omega = 16;
  int n_theta = 16;
  double rho = 1000.0;

  // fft
  int fft_n = 256;
  double fft_domain = 500.0;
  double fft_choppiness = 1.0;
  std::optional<std::uint64_t> fft_seed;  ///< defaults to sim.seed

  // particles and synthesis
  double trough_ratio = 1.0;
  AmplitudeConvention convention = AmplitudeConvention::kEnergy;
  bool prewarm = true;
  double patch_choppiness = 0.0;
  bool recompute_normals = false;

  std::vector<PatchSpec> patches;
  std::vector<BodySpec> bodies;
  EmissionOptions emission;
  int wp_tiles = 5;  ///< tiles per side covering the FFT domain in wp-only mode

  // run
  double dt = 1.0 / 60.0;
  int frames = 600;
  std::uint64_t seed = 1;
  SimMode mode = SimMode::kHybrid;

  // output
  std::string output_dir = "out";
  bool write_frames = true;
  int frame_every = 1;
  int output_res = 256;
  Vec2 output_origin{0.0, 0.0};
  double output_size = 500.0;
  bool write_timing = true;

  // stream
  int stream_port = 0;
  int stream_res = 128;
  double stream_rate_hz = 20.0;
};

using KeyValues = std::map<std::string, std::string>;

/// Parses key=value text. Throws ConfigError with the line number on syntax errors.
KeyValues parse_key_values(std::string_view text);
KeyValues load_key_values(const std::string& path);

/// Applies a single "key=value" override.
void apply_override(KeyValues& kv, std::string_view assignment);

/// Builds and validates a config. Unknown keys and bad values raise
/// ConfigError naming the key.
SimConfig build_config(const KeyValues& kv);

SimConfig load_config(const std::string& path);

/// Throws ConfigError naming the offending field.
void validate(const SimConfig& config);

/// Canonical key=value listing of every effective setting.
std::string echo(const SimConfig& config);

SpectrumParams spectrum_params(const SimConfig& config);
DirectionalSpectrum directional_spectrum(const SimConfig& config);
FloatingBody make_body(const BodySpec& spec, double rho, double g);

}  // namespace hocean
