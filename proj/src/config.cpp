#include "hocean/config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hocean/error.h"

namespace hocean {

std::string to_string(SimMode mode) {
  switch (mode) {
    case SimMode::kHybrid: return "hybrid";
    case SimMode::kFftOnly: return "fft-only";
    case SimMode::kWpOnly: return "wp-only";
  }
  return "hybrid";
}

SimMode parse_mode(std::string_view text) {
  if (text == "hybrid") return SimMode::kHybrid;
  if (text == "fft-only") return SimMode::kFftOnly;
  if (text == "wp-only") return SimMode::kWpOnly;
  throw ConfigError("sim.mode: expected hybrid, fft-only or wp-only, got '" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::pair<std::string, std::string> split_assignment(std::string_view line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
  const std::string key(trim(line.substr(0, eq)));
  const std::string value(trim(line.substr(eq + 1)));
  if (key.empty()) throw ConfigError(where + ": empty key");
  return {key, value};
}

class Reader {
 public:
  explicit Reader(const KeyValues& kv) : kv_(kv) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  const std::string* raw(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  void number(const std::string& key, double& out) {
    const std::string* v = raw(key);
    if (v == nullptr) return;
    double x = 0.0;
    const auto* end = v->data() + v->size();
    const auto res = std::from_chars(v->data(), end, x);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(x)) {
      throw ConfigError(key + ": expected a number, got '" + *v + "'");
    }
    out = x;
  }

  void integer(const std::string& key, int& out) {
    const std::string* v = raw(key);
    if (v == nullptr) return;
    int x = 0;
    const auto* end = v->data() + v->size();
    const auto res = std::from_chars(v->data(), end, x);
    if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key + ": expected an integer, got '" + *v + "'");
    out = x;
  }

  void unsigned64(const std::string& key, std::uint64_t& out) {
    const std::string* v = raw(key);
    if (v == nullptr) return;
    std::uint64_t x = 0;
    const auto* end = v->data() + v->size();
    const auto res = std::from_chars(v->data(), end, x);
    if (res.ec != std::errc() || res.ptr != end) {
      throw ConfigError(key + ": expected a non-negative integer, got '" + *v + "'");
    }
    out = x;
  }

  void boolean(const std::string& key, bool& out) {
    const std::string* v = raw(key);
    if (v == nullptr) return;
    if (*v == "true" || *v == "1" || *v == "yes") {
      out = true;
    } else if (*v == "false" || *v == "0" || *v == "no") {
      out = false;
    } else {
      throw ConfigError(key + ": expected true or false, got '" + *v + "'");
    }
  }

  void text(const std::string& key, std::string& out) {
    const std::string* v = raw(key);
    if (v != nullptr) out = *v;
  }

  void check_unused() const {
    for (const auto& [k, v] : kv_) {
      if (used_.count(k) == 0) throw ConfigError(k + ": unknown key");
    }
  }

 private:
  const KeyValues& kv_;
  std::set<std::string> used_;
};

PatchSpec default_patch(const SimConfig& c) {
  PatchSpec p;
  p.region.l1 = 100.0;
  p.region.l2 = 100.0;
  p.region.margin = 10.0;
  p.region.origin = {0.5 * c.fft_domain - 50.0, 0.5 * c.fft_domain - 50.0};
  return p;
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto [key, value] = split_assignment(line, "line " + std::to_string(line_no));
    kv[key] = value;
  }
  return kv;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

void apply_override(KeyValues& kv, std::string_view assignment) {
  auto [key, value] = split_assignment(trim(assignment), "override '" + std::string(assignment) + "'");
  kv[key] = value;
}

SimConfig build_config(const KeyValues& kv) {
  SimConfig c;
  Reader r(kv);
  r.number("spectrum.u10", c.u10);
  r.number("spectrum.fetch", c.fetch);
  r.number("spectrum.g", c.g);
  r.number("spectrum.direction", c.direction);
  r.number("spectrum.sigma_low", c.sigma_low);
  r.number("spectrum.sigma_high", c.sigma_high);
  if (const std::string* v = r.raw("spectrum.bucket_frequency")) {
    if (*v == "mean-value") {
      c.bucket_frequency = BucketFrequency::kMeanValue;
    } else if (*v == "centroid") {
      c.bucket_frequency = BucketFrequency::kCentroid;
    } else if (*v == "midpoint") {
      c.bucket_frequency = BucketFrequency::kMidpoint;
    } else {
      throw ConfigError("spectrum.bucket_frequency: expected mean-value, centroid or midpoint");
    }
  }
  r.integer("buckets.n_omega", c.n_omega);
  r.integer("buckets.n_theta", c.n_theta);
  r.number("water.rho", c.rho);

  r.integer("fft.n", c.fft_n);
  r.number("fft.domain_size", c.fft_domain);
  r.number("fft.choppiness", c.fft_choppiness);

  r.number("particles.trough_ratio", c.trough_ratio);
  if (const std::string* v = r.raw("particles.amplitude_convention")) {
    if (*v == "energy") {
      c.convention = AmplitudeConvention::kEnergy;
    } else if (*v == "peak") {
      c.convention = AmplitudeConvention::kPeak;
    } else {
      throw ConfigError("particles.amplitude_convention: expected energy or peak");
    }
  }
  r.boolean("particles.prewarm", c.prewarm);
  r.number("patch.choppiness", c.patch_choppiness);
  r.boolean("blend.recompute_normals", c.recompute_normals);

  r.number("sim.dt", c.dt);
  r.integer("sim.frames", c.frames);
  r.unsigned64("sim.seed", c.seed);
  if (r.has("fft.seed")) {
    std::uint64_t fs = 0;
    r.unsigned64("fft.seed", fs);
    c.fft_seed = fs;
  }
  if (const std::string* v = r.raw("sim.mode")) c.mode = parse_mode(*v);
  r.integer("sim.wp_tiles", c.wp_tiles);

  c.output_size = c.fft_domain;
  r.text("output.dir", c.output_dir);
  r.boolean("output.write_frames", c.write_frames);
  r.boolean("output.write_timing", c.write_timing);
  r.integer("output.every", c.frame_every);
  r.integer("output.resolution", c.output_res);
  r.number("output.origin_x", c.output_origin.x);
  r.number("output.origin_y", c.output_origin.y);
  r.number("output.size", c.output_size);

  r.integer("stream.port", c.stream_port);
  r.integer("stream.resolution", c.stream_res);
  r.number("stream.rate_hz", c.stream_rate_hz);

  r.number("interaction.energy_scale", c.emission.energy_scale);
  r.integer("interaction.ring_count", c.emission.ring_count);
  r.integer("interaction.wake_count", c.emission.wake_count);
  c.emission.trough_ratio = c.trough_ratio;

  int patch_count = 1;
  r.integer("patch.count", patch_count);
  if (patch_count < 0) throw ConfigError("patch.count: must be >= 0");
  for (int i = 0; i < patch_count; ++i) {
    PatchSpec p = default_patch(c);
    const std::string pre = "patch." + std::to_string(i) + ".";
    r.number(pre + "origin_x", p.region.origin.x);
    r.number(pre + "origin_y", p.region.origin.y);
    r.number(pre + "l1", p.region.l1);
    r.number(pre + "l2", p.region.l2);
    r.number(pre + "margin", p.region.margin);
    r.integer(pre + "res", p.resolution);
    r.integer(pre + "follow_body", p.follow_body);
    c.patches.push_back(p);
  }

  int body_count = 0;
  r.integer("body.count", body_count);
  if (body_count < 0) throw ConfigError("body.count: must be >= 0");
  for (int i = 0; i < body_count; ++i) {
    BodySpec b;
    b.id = i;
    b.position = {0.5 * c.fft_domain, 0.5 * c.fft_domain, 0.0};
    const std::string pre = "body." + std::to_string(i) + ".";
    r.number(pre + "x", b.position.x);
    r.number(pre + "y", b.position.y);
    r.number(pre + "z", b.position.z);
    r.number(pre + "yaw", b.yaw);
    r.number(pre + "vx", b.velocity.x);
    r.number(pre + "vy", b.velocity.y);
    r.number(pre + "vz", b.velocity.z);
    r.number(pre + "length", b.length);
    r.number(pre + "width", b.width);
    r.number(pre + "height", b.height);
    r.number(pre + "density", b.density);
    r.integer(pre + "probes_x", b.probes_x);
    r.integer(pre + "probes_y", b.probes_y);
    r.number(pre + "zeta", b.zeta);
    r.number(pre + "thrust", b.thrust);
    r.number(pre + "rudder", b.rudder);
    c.bodies.push_back(b);
  }

  r.check_unused();
  validate(c);
  return c;
}

SimConfig load_config(const std::string& path) { return build_config(load_key_values(path)); }

void validate(const SimConfig& c) {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(key) + ": must be positive");
  };
  positive(c.u10, "spectrum.u10");
  positive(c.fetch, "spectrum.fetch");
  positive(c.g, "spectrum.g");
  positive(c.rho, "water.rho");
  positive(c.fft_domain, "fft.domain_size");
  if (!(c.sigma_low > 0.0 && c.sigma_low < 1.0)) throw ConfigError("spectrum.sigma_low: must lie in (0, 1)");
  if (!(c.sigma_high > 0.0 && c.sigma_high < 1.0)) throw ConfigError("spectrum.sigma_high: must lie in (0, 1)");
  if (c.n_omega < 2 || c.n_omega > 65535) throw ConfigError("buckets.n_omega: must lie in [2, 65535]");
  if (c.n_theta < 2) throw ConfigError("buckets.n_theta: must be >= 2");
  if (c.fft_n < 2 || (c.fft_n & (c.fft_n - 1)) != 0) throw ConfigError("fft.n: must be a power of two");
  if (c.fft_choppiness < 0.0) throw ConfigError("fft.choppiness: must be >= 0");
  if (c.trough_ratio < 0.0) throw ConfigError("particles.trough_ratio: must be >= 0");
  if (!(c.dt > 0.0 && c.dt <= 0.1)) throw ConfigError("sim.dt: must lie in (0, 0.1]");
  if (c.frames < 0) throw ConfigError("sim.frames: must be >= 0");
  if (c.wp_tiles < 1) throw ConfigError("sim.wp_tiles: must be >= 1");
  if (c.frame_every < 1) throw ConfigError("output.every: must be >= 1");
  if (c.output_res < 2) throw ConfigError("output.resolution: must be >= 2");
  positive(c.output_size, "output.size");
  if (c.stream_port < 0 || c.stream_port > 65535) throw ConfigError("stream.port: must lie in [0, 65535]");
  if (c.stream_res < 2) throw ConfigError("stream.resolution: must be >= 2");
  positive(c.stream_rate_hz, "stream.rate_hz");
  if (c.emission.ring_count < 0 || c.emission.wake_count < 0) throw ConfigError("interaction: counts must be >= 0");
  if (c.emission.energy_scale < 0.0) throw ConfigError("interaction.energy_scale: must be >= 0");

  std::vector<PatchRegion> regions;
  for (std::size_t i = 0; i < c.patches.size(); ++i) {
    const auto& p = c.patches[i];
    const std::string pre = "patch." + std::to_string(i) + ".";
    try {
      validate(p.region);
    } catch (const ConfigError& e) {
      throw ConfigError(pre + std::string(e.what()).substr(6));
    }
    if (p.resolution < 8) throw ConfigError(pre + "res: must be >= 8");
    if (p.follow_body >= static_cast<int>(c.bodies.size())) throw ConfigError(pre + "follow_body: no such body");
    regions.push_back(p.region);
  }
  if (c.mode != SimMode::kWpOnly) check_patches(regions);
  for (std::size_t i = 0; i < c.bodies.size(); ++i) {
    const auto& b = c.bodies[i];
    const std::string pre = "body." + std::to_string(i) + ".";
    if (!(b.length > 0.0 && b.width > 0.0 && b.height > 0.0)) throw ConfigError(pre + "length/width/height: must be positive");
    if (!(b.density > 0.0)) throw ConfigError(pre + "density: must be positive");
    if (b.probes_x < 1 || b.probes_y < 1) throw ConfigError(pre + "probes_x/probes_y: must be >= 1");
    if (b.zeta < 0.0) throw ConfigError(pre + "zeta: must be >= 0");
  }
}

namespace {

// Shortest form that parses back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string echo(const SimConfig& c) {
  std::ostringstream o;
  auto line = [&](const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; };
  const char* rep = c.bucket_frequency == BucketFrequency::kMeanValue ? "mean-value"
                    : c.bucket_frequency == BucketFrequency::kCentroid ? "centroid"
                                                                       : "midpoint";
  line("spectrum.u10", fmt(c.u10));
  line("spectrum.fetch", fmt(c.fetch));
  line("spectrum.g", fmt(c.g));
  line("spectrum.direction", fmt(c.direction));
  line("spectrum.sigma_low", fmt(c.sigma_low));
  line("spectrum.sigma_high", fmt(c.sigma_high));
  line("spectrum.bucket_frequency", rep);
  line("buckets.n_omega", std::to_string(c.n_omega));
  line("buckets.n_theta", std::to_string(c.n_theta));
  line("water.rho", fmt(c.rho));
  line("fft.n", std::to_string(c.fft_n));
  line("fft.domain_size", fmt(c.fft_domain));
  line("fft.choppiness", fmt(c.fft_choppiness));
  if (c.fft_seed) line("fft.seed", std::to_string(*c.fft_seed));
  line("particles.trough_ratio", fmt(c.trough_ratio));
  line("particles.amplitude_convention", c.convention == AmplitudeConvention::kEnergy ? "energy" : "peak");
  line("particles.prewarm", c.prewarm ? "true" : "false");
  line("patch.choppiness", fmt(c.patch_choppiness));
  line("blend.recompute_normals", c.recompute_normals ? "true" : "false");
  line("sim.dt", fmt(c.dt));
  line("sim.frames", std::to_string(c.frames));
  line("sim.seed", std::to_string(c.seed));
  line("sim.mode", to_string(c.mode));
  line("sim.wp_tiles", std::to_string(c.wp_tiles));
  line("output.dir", c.output_dir);
  line("output.write_frames", c.write_frames ? "true" : "false");
  line("output.write_timing", c.write_timing ? "true" : "false");
  line("output.every", std::to_string(c.frame_every));
  line("output.resolution", std::to_string(c.output_res));
  line("output.origin_x", fmt(c.output_origin.x));
  line("output.origin_y", fmt(c.output_origin.y));
  line("output.size", fmt(c.output_size));
  line("stream.port", std::to_string(c.stream_port));
  line("stream.resolution", std::to_string(c.stream_res));
  line("stream.rate_hz", fmt(c.stream_rate_hz));
  line("interaction.energy_scale", fmt(c.emission.energy_scale));
  line("interaction.ring_count", std::to_string(c.emission.ring_count));
  line("interaction.wake_count", std::to_string(c.emission.wake_count));
  line("patch.count", std::to_string(c.patches.size()));
  for (std::size_t i = 0; i < c.patches.size(); ++i) {
    const auto& p = c.patches[i];
    const std::string pre = "patch." + std::to_string(i) + ".";
    line(pre + "origin_x", fmt(p.region.origin.x));
    line(pre + "origin_y", fmt(p.region.origin.y));
    line(pre + "l1", fmt(p.region.l1));
    line(pre + "l2", fmt(p.region.l2));
    line(pre + "margin", fmt(p.region.margin));
    line(pre + "res", std::to_string(p.resolution));
    line(pre + "follow_body", std::to_string(p.follow_body));
  }
  line("body.count", std::to_string(c.bodies.size()));
  for (std::size_t i = 0; i < c.bodies.size(); ++i) {
    const auto& b = c.bodies[i];
    const std::string pre = "body." + std::to_string(i) + ".";
    line(pre + "x", fmt(b.position.x));
    line(pre + "y", fmt(b.position.y));
    line(pre + "z", fmt(b.position.z));
    line(pre + "yaw", fmt(b.yaw));
    line(pre + "vx", fmt(b.velocity.x));
    line(pre + "vy", fmt(b.velocity.y));
    line(pre + "vz", fmt(b.velocity.z));
    line(pre + "length", fmt(b.length));
    line(pre + "width", fmt(b.width));
    line(pre + "height", fmt(b.height));
    line(pre + "density", fmt(b.density));
    line(pre + "probes_x", std::to_string(b.probes_x));
    line(pre + "probes_y", std::to_string(b.probes_y));
    line(pre + "zeta", fmt(b.zeta));
    line(pre + "thrust", fmt(b.thrust));
    line(pre + "rudder", fmt(b.rudder));
  }
  return o.str();
}

SpectrumParams spectrum_params(const SimConfig& c) {
  SpectrumParams p = derive_params(c.u10, c.fetch, c.g);
  p.sigma_low = c.sigma_low;
  p.sigma_high = c.sigma_high;
  return p;
}

DirectionalSpectrum directional_spectrum(const SimConfig& c) {
  DirectionalSpectrum s;
  s.params = spectrum_params(c);
  s.mean_direction = c.direction;
  return s;
}

FloatingBody make_body(const BodySpec& spec, double rho, double g) {
  FloatingBody b = make_box_body(spec.id, spec.position, spec.length, spec.width, spec.height, spec.density, rho, g,
                                 spec.probes_x, spec.probes_y, spec.zeta);
  b.yaw = spec.yaw;
  b.velocity = spec.velocity;
  b.thrust = spec.thrust;
  b.rudder = spec.rudder;
  return b;
}

}  // namespace hocean
