/**
 * @file interaction.h
 * @brief Floating bodies: probe buoyancy against the blended surface, and
 * wave-particle emission driven by the body's displaced volume.
 */
#pragma once

#include <functional>
#include <vector>

#include "hocean/coupling.h"
#include "hocean/particles.h"
#include "hocean/spectrum.h"
#include "hocean/vec.h"

namespace hocean {

struct Probe {
  Vec3 local;            ///< body frame, z up; bottom-face probes sit at z = -height / 2
  double volume = 0.0;   ///< displaced volume share at full submersion (m^3)
};

/// Box hull with yaw-only rigid dynamics. `position` is the box center.
struct FloatingBody {
  int id = 0;
  Vec3 position;
  double yaw = 0.0;
  Vec3 velocity;
  double yaw_rate = 0.0;

  double mass = 1.0;
  double yaw_inertia = 1.0;
  double length = 1.0;  ///< along the heading
  double width = 1.0;
  double height = 1.0;
  double hull_extent = 1.0;  ///< characteristic radius (m)
  std::vector<Probe> probes;

  double heave_drag = 0.0;       ///< N s / m, scaled by the wetted probe fraction
  double horizontal_drag = 0.0;  ///< N s / m
  double yaw_drag = 0.0;         ///< N m s
  double max_thrust = 0.0;       ///< N at thrust = 1
  double max_rudder = 0.0;       ///< N m at rudder = 1

  double thrust = 0.0;  ///< [-1, 1]
  double rudder = 0.0;  ///< [-1, 1]

  double submerged_volume = 0.0;  ///< from the last buoyancy step
  double mean_depth = 0.0;        ///< mean probe submersion depth from the last step (m)
  double surface_height = 0.0;    ///< mean probe surface height from the last step

  double full_volume() const;
  Vec2 heading() const { return from_angle(yaw); }
  Vec3 probe_world(const Probe& p) const;
};

/// Box of the given density with an nx-by-ny probe lattice on its bottom face.
/// Heave drag defaults to damping ratio `zeta` of the linearized heave mode.
FloatingBody make_box_body(int id, Vec3 position, double length, double width, double height, double density,
                           double rho, double g, int probes_x = 3, int probes_y = 3, double zeta = 0.2);

void validate(const FloatingBody& body);

using SurfaceQuery = std::function<SurfaceSample(Vec2)>;

/// Flat water at z = level.
SurfaceQuery flat_surface(double level = 0.0);

struct BuoyancyReport {
  Vec3 force;       ///< net fluid force including drag (N)
  double torque = 0.0;
  double submerged_volume = 0.0;
  double mean_depth = 0.0;
  int wet_probes = 0;
};

/// Semi-implicit Euler step: fluid forces and gravity update velocity, then pose.
BuoyancyReport buoyancy_step(FloatingBody& body, const SurfaceQuery& surface, double dt, double rho, double g);

/// Submerged volume and mean probe depth for the current pose without moving the body.
BuoyancyReport measure_submersion(const FloatingBody& body, const SurfaceQuery& surface);

enum class EmissionMode { kRing, kWake };

struct EmissionEvent {
  Vec2 origin;
  EmissionMode mode = EmissionMode::kRing;
  double energy = 0.0;     ///< J, always >= 0
  double volume = 0.0;     ///< signed volume change behind the event (m^3)
  Vec2 direction;          ///< reversed horizontal velocity (wake only)
  int bucket = 0;
};

struct EmissionOptions {
  double energy_scale = 1.0;           ///< multiplies rho g |dV| h_c
  double kelvin_half_angle = 0.339836909454;  ///< asin(1/3)
  int ring_count = 16;                 ///< crests per ring event
  int wake_count = 8;                  ///< crests per wake event
  double trough_ratio = 1.0;
  double min_speed = 1e-6;             ///< horizontal speed below which no wake is emitted
};

struct EmissionResult {
  std::vector<EmissionEvent> events;
  std::vector<WaveParticle> particles;
  double emitted_energy = 0.0;  ///< sum of crest energies (J)
};

/// Emission for one step. `previous_volume` is the submerged volume one step
/// earlier; `current` is this step's submersion measurement.
EmissionResult emit_from_motion(const FloatingBody& body, double previous_volume, const BuoyancyReport& current,
                                const PatchRegion& patch, const BucketTable& table, double dt, double rho,
                                double g, double time, const EmissionOptions& options = {});

}  // namespace hocean
