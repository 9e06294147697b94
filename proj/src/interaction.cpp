#include "hocean/interaction.h"

#include <algorithm>
#include <cmath>

#include "hocean/error.h"

namespace hocean {

double FloatingBody::full_volume() const {
  double v = 0.0;
  for (const auto& p : probes) v += p.volume;
  return v;
}

Vec3 FloatingBody::probe_world(const Probe& p) const {
  const Vec2 r = rotate(p.local.xy(), yaw);
  return {position.x + r.x, position.y + r.y, position.z + p.local.z};
}

FloatingBody make_box_body(int id, Vec3 position, double length, double width, double height, double density,
                           double rho, double g, int probes_x, int probes_y, double zeta) {
  if (!(length > 0.0 && width > 0.0 && height > 0.0)) throw ConfigError("body: dimensions must be positive");
  if (!(density > 0.0)) throw ConfigError("body.density: must be positive");
  if (probes_x < 1 || probes_y < 1) throw ConfigError("body.probes: need at least one probe per axis");
  FloatingBody b;
  b.id = id;
  b.position = position;
  b.length = length;
  b.width = width;
  b.height = height;
  const double volume = length * width * height;
  b.mass = density * volume;
  b.yaw_inertia = b.mass * (length * length + width * width) / 12.0;
  b.hull_extent = 0.5 * std::hypot(length, width);
  const double share = volume / (probes_x * probes_y);
  for (int j = 0; j < probes_y; ++j) {
    for (int i = 0; i < probes_x; ++i) {
      Probe p;
      p.local = {((i + 0.5) / probes_x - 0.5) * length, ((j + 0.5) / probes_y - 0.5) * width, -0.5 * height};
      p.volume = share;
      b.probes.push_back(p);
    }
  }
  // Linearized heave stiffness rho g A over box height.
  const double stiffness = rho * g * length * width;
  b.heave_drag = 2.0 * zeta * std::sqrt(stiffness * b.mass);
  b.horizontal_drag = b.heave_drag;
  b.yaw_drag = b.heave_drag * (length * length + width * width) / 12.0;
  b.max_thrust = b.mass;
  b.max_rudder = 0.5 * b.yaw_inertia;
  return b;
}

void validate(const FloatingBody& body) {
  if (!(body.mass > 0.0)) throw ConfigError("body.mass: must be positive");
  if (!(body.height > 0.0)) throw ConfigError("body.height: must be positive");
  if (!(body.hull_extent > 0.0)) throw ConfigError("body.hull_extent: must be positive");
  if (body.probes.empty()) throw ConfigError("body.probes: at least one probe is required");
}

SurfaceQuery flat_surface(double level) {
  return [level](Vec2) {
    SurfaceSample s;
    s.height = level;
    return s;
  };
}

namespace {

struct ProbeForces {
  BuoyancyReport report;
  double surface_sum = 0.0;
};

ProbeForces probe_forces(const FloatingBody& body, const SurfaceQuery& surface, double rho, double g) {
  ProbeForces out;
  double depth_sum = 0.0;
  for (const auto& p : body.probes) {
    const Vec3 w = body.probe_world(p);
    const SurfaceSample s = surface(w.xy());
    out.surface_sum += s.height;
    const double depth = s.height - w.z;
    if (depth <= 0.0) continue;
    const double frac = std::min(depth / body.height, 1.0);
    const double v = p.volume * frac;
    out.report.submerged_volume += v;
    depth_sum += std::min(depth, body.height);
    ++out.report.wet_probes;
    const Vec3 f = s.normal * (rho * g * v);
    out.report.force += f;
    const Vec2 r = rotate(p.local.xy(), body.yaw);
    out.report.torque += r.x * f.y - r.y * f.x;
  }
  if (out.report.wet_probes > 0) out.report.mean_depth = depth_sum / out.report.wet_probes;
  return out;
}

}  // namespace

BuoyancyReport measure_submersion(const FloatingBody& body, const SurfaceQuery& surface) {
  return probe_forces(body, surface, 1.0, 1.0).report;
}

BuoyancyReport buoyancy_step(FloatingBody& body, const SurfaceQuery& surface, double dt, double rho, double g) {
  if (!(dt > 0.0)) throw ParameterError("buoyancy_step: dt must be positive");
  ProbeForces pf = probe_forces(body, surface, rho, g);
  BuoyancyReport& rep = pf.report;
  const double mean_surface = pf.surface_sum / static_cast<double>(body.probes.size());
  const double wet = static_cast<double>(rep.wet_probes) / static_cast<double>(body.probes.size());

  // Drag relative to the surface's vertical motion since the previous step.
  const double surface_speed = body.submerged_volume > 0.0 ? (mean_surface - body.surface_height) / dt : 0.0;
  Vec3 drag{-body.horizontal_drag * wet * body.velocity.x, -body.horizontal_drag * wet * body.velocity.y,
            -body.heave_drag * wet * (body.velocity.z - surface_speed)};
  rep.force += drag;
  const Vec2 push = body.heading() * (std::clamp(body.thrust, -1.0, 1.0) * body.max_thrust * wet);
  const double steer = std::clamp(body.rudder, -1.0, 1.0) * body.max_rudder * wet;
  rep.torque += steer - body.yaw_drag * wet * body.yaw_rate;

  Vec3 total = rep.force + Vec3{push.x, push.y, -body.mass * g};
  body.velocity += total * (dt / body.mass);
  body.position += body.velocity * dt;
  body.yaw_rate += rep.torque / body.yaw_inertia * dt;
  body.yaw = wrap_angle(body.yaw + body.yaw_rate * dt);

  body.submerged_volume = rep.submerged_volume;
  body.mean_depth = rep.mean_depth;
  body.surface_height = mean_surface;
  return rep;
}

namespace {

void push_pair(EmissionResult& out, Vec2 pos, Vec2 dir, double amp, const FrequencyBucket& b, double time,
               double trough_ratio) {
  WaveParticle crest;
  crest.position = pos;
  crest.direction = dir;
  crest.amplitude = amp;
  crest.birth_time = static_cast<float>(time);
  crest.bucket = static_cast<std::uint16_t>(b.index);
  crest.role = ParticleRole::kCrest;
  out.particles.push_back(crest);
  if (trough_ratio != 0.0) {
    // The trough leads, away from the hull; a trailing trough of every ring
    // member would land on the hull center.
    WaveParticle trough = crest;
    trough.position = pos + dir * b.radius;
    trough.amplitude = -trough_ratio * amp;
    trough.role = ParticleRole::kTrough;
    out.particles.push_back(trough);
  }
}

}  // namespace

EmissionResult emit_from_motion(const FloatingBody& body, double previous_volume, const BuoyancyReport& current,
                                const PatchRegion& patch, const BucketTable& table, double dt, double rho,
                                double g, double time, const EmissionOptions& options) {
  EmissionResult out;
  const Vec2 center = body.position.xy();
  if (patch.outside_distance(center) > body.hull_extent) return out;
  const double h_c = current.mean_depth;
  if (!(h_c > 0.0) || !(dt > 0.0)) return out;

  const double d_volume = current.submerged_volume - previous_volume;
  if (d_volume != 0.0 && options.ring_count > 0) {
    EmissionEvent e;
    e.origin = center;
    e.mode = EmissionMode::kRing;
    e.volume = d_volume;
    e.energy = options.energy_scale * rho * g * std::abs(d_volume) * h_c;
    e.bucket = table.nearest_radius(body.hull_extent);
    const FrequencyBucket& b = table[static_cast<std::size_t>(e.bucket)];
    const double per = e.energy / options.ring_count;
    const double amp = std::copysign(amplitude_for_energy(per, b.radius, rho, g), d_volume);
    for (int j = 0; j < options.ring_count; ++j) {
      const Vec2 dir = from_angle(body.yaw + 2.0 * kPi * j / options.ring_count);
      push_pair(out, center + dir * body.hull_extent, dir, amp, b, time, options.trough_ratio);
      out.emitted_energy += particle_energy(amp, b.radius, rho, g);
    }
    out.events.push_back(e);
  }

  const Vec2 vh = body.velocity.xy();
  const double speed = length(vh);
  if (speed > options.min_speed && options.wake_count > 0) {
    const double rel = std::atan2(vh.y, vh.x) - body.yaw;
    const double frontal = std::abs(body.length * std::sin(rel)) + std::abs(body.width * std::cos(rel));
    const double swept = frontal * std::min(h_c, body.height) * speed * dt;
    EmissionEvent e;
    e.origin = center;
    e.mode = EmissionMode::kWake;
    e.volume = swept;
    e.direction = vh * (-1.0 / speed);
    e.energy = options.energy_scale * rho * g * swept * h_c;
    e.bucket = table.nearest_radius(0.5 * body.hull_extent);
    const FrequencyBucket& b = table[static_cast<std::size_t>(e.bucket)];
    const double amp = amplitude_for_energy(e.energy / options.wake_count, b.radius, rho, g);
    const double a = options.kelvin_half_angle;
    for (int j = 0; j < options.wake_count; ++j) {
      const double off = options.wake_count == 1 ? 0.0 : -a + 2.0 * a * j / (options.wake_count - 1);
      const Vec2 dir = rotate(e.direction, off);
      push_pair(out, center + dir * body.hull_extent, dir, amp, b, time, options.trough_ratio);
      out.emitted_energy += particle_energy(amp, b.radius, rho, g);
    }
    out.events.push_back(e);
  }
  return out;
}

}  // namespace hocean
