/**
 * @file particles.h
 * @brief Wave-particle population of a patch: boundary injection, advection, lifecycle.
 *
 * Injection follows the energy-flux balance between the spectrum and the
 * particle groups: a pair of opposite sides of length L receives
 *
 *     N = 4 L dt w^3 / (pi^3 g)
 *
 * groups per step for a bucket of frequency w. A group is N_theta crests at
 * equally spaced directions with amplitude A = sqrt(2 S(w, theta) dw dtheta);
 * each crest carries E = rho g A^2 pi r^2 / 8 and drags a trailing trough.
 */
#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "hocean/spectrum.h"
#include "hocean/vec.h"

namespace hocean {

/// Axis-aligned patch. Sides: 0 = west (x = min), 1 = east, 2 = south (y = min), 3 = north.
struct PatchRegion {
  Vec2 origin;         ///< min corner (m)
  double l1 = 100.0;   ///< extent along x (m)
  double l2 = 100.0;   ///< extent along y (m)
  double margin = 10.0;  ///< blend band width (m)

  Vec2 max_corner() const { return {origin.x + l1, origin.y + l2}; }
  Vec2 center() const { return {origin.x + 0.5 * l1, origin.y + 0.5 * l2}; }
  bool contains(Vec2 p) const;
  /// Euclidean distance to the rectangle, 0 inside.
  double outside_distance(Vec2 p) const;
  /// Distance to the nearest side for points inside, 0 on or outside the boundary.
  double inward_depth(Vec2 p) const;
  double side_length(int side) const { return side < 2 ? l2 : l1; }
  Vec2 inward_normal(int side) const;
  /// Point at arc position u in [0, side_length(side)] along `side`.
  Vec2 side_point(int side, double u) const;
  bool overlaps(const PatchRegion& other) const;
};

inline constexpr int opposite_side(int side) { return side ^ 1; }

/// Throws ConfigError unless l1, l2 > 0 and 0 < margin < min(l1, l2) / 2.
void validate(const PatchRegion& patch);

enum class ParticleRole : std::uint8_t { kCrest, kTrough };

struct WaveParticle {
  Vec2 position;
  Vec2 direction;          ///< unit propagation direction
  double amplitude = 0.0;  ///< signed (troughs and suction crests are negative)
  float birth_time = 0.0f;
  std::uint16_t bucket = 0;
  ParticleRole role = ParticleRole::kCrest;
};

/// A patch's particles, kept per bucket so each layer can be processed independently.
class ParticlePool {
 public:
  explicit ParticlePool(std::size_t n_buckets = 0) : buckets_(n_buckets) {}

  void add(const WaveParticle& p) { buckets_[p.bucket].push_back(p); }
  void add(const std::vector<WaveParticle>& ps) {
    for (const auto& p : ps) add(p);
  }
  std::size_t bucket_count() const { return buckets_.size(); }
  std::vector<WaveParticle>& bucket(std::size_t i) { return buckets_[i]; }
  const std::vector<WaveParticle>& bucket(std::size_t i) const { return buckets_[i]; }
  std::size_t size() const;
  void clear();

 private:
  std::vector<std::vector<WaveParticle>> buckets_;
};

/// Per-bucket injection state and energy counters (J).
struct InjectionLedger {
  std::vector<std::array<double, 4>> accumulator;  ///< owed groups per (bucket, side), in [0, 1)
  std::vector<std::uint64_t> injected_groups;
  std::vector<double> injected_energy;
  std::vector<double> emitted_energy;    ///< from floating bodies
  std::vector<double> despawned_energy;

  InjectionLedger() = default;
  explicit InjectionLedger(std::size_t n_buckets);
  std::size_t size() const { return injected_groups.size(); }
};

struct ParticleOptions {
  double rho = 1000.0;
  double trough_ratio = 1.0;  ///< trough amplitude is -trough_ratio * A
  bool skip_zero_amplitude = true;
};

/// Expected groups per step entering through one pair of opposite sides of length L.
double groups_per_step(const FrequencyBucket& bucket, double side_length, double dt, double g);

/// Deep-water particle energy rho g A^2 pi r^2 / 8.
double particle_energy(double amplitude, double radius, double rho, double g);
/// Inverse of particle_energy (non-negative amplitude).
double amplitude_for_energy(double energy, double radius, double rho, double g);

/// Builds one full group for `bucket`, attributed to `side`: members heading
/// into the patch through `side` spawn there, the rest on the opposite side.
/// `direction_offset` shifts the whole fan of directions. Crest energy is added
/// to `*group_energy` when non-null.
std::vector<WaveParticle> make_group(const PatchRegion& patch, const BucketTable& table,
                                     const DirectionalSpectrum& spectrum, int bucket, int side,
                                     double direction_offset, double time, std::mt19937_64& rng,
                                     const ParticleOptions& options, double* group_energy = nullptr);

/// Boundary injection for one bucket over one step.
std::vector<WaveParticle> inject_bucket(const PatchRegion& patch, const BucketTable& table,
                                        const DirectionalSpectrum& spectrum, InjectionLedger& ledger,
                                        int bucket, double dt, double time, std::mt19937_64& rng,
                                        const ParticleOptions& options);

/// Boundary injection for every bucket over one step.
std::vector<WaveParticle> inject(const PatchRegion& patch, const BucketTable& table,
                                 const DirectionalSpectrum& spectrum, InjectionLedger& ledger, double dt,
                                 double time, std::mt19937_64& rng, const ParticleOptions& options);

struct AdvectReport {
  std::size_t despawned = 0;
};

/// Moves every particle by direction * c * dt and removes those whose kernel
/// disk (radius r) no longer touches the patch. Despawned crest energy is
/// logged in the ledger; despawned particles are appended to `removed` if given.
AdvectReport advect(ParticlePool& pool, double dt, const PatchRegion& patch, const BucketTable& table,
                    InjectionLedger& ledger, const ParticleOptions& options,
                    std::vector<WaveParticle>* removed = nullptr);

/// Fills the pool with the population an injection run would have at `time`
/// if it had been running forever: each bucket replays its last
/// (diagonal + 2r) / c seconds of injection and places particles along their
/// straight paths. Counts go through the ledger like ordinary steps.
void prewarm(ParticlePool& pool, const PatchRegion& patch, const BucketTable& table,
             const DirectionalSpectrum& spectrum, InjectionLedger& ledger, double dt, double time,
             std::mt19937_64& rng, const ParticleOptions& options);

/// Sum of crest energies currently alive in the pool, per bucket.
std::vector<double> resident_energy(const ParticlePool& pool, const BucketTable& table,
                                    const ParticleOptions& options);

}  // namespace hocean
