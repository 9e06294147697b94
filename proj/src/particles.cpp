#include "hocean/particles.h"

#include <algorithm>
#include <cmath>

#include "hocean/error.h"

namespace hocean {

bool PatchRegion::contains(Vec2 p) const {
  return p.x >= origin.x && p.x <= origin.x + l1 && p.y >= origin.y && p.y <= origin.y + l2;
}

double PatchRegion::outside_distance(Vec2 p) const {
  const double dx = std::max({origin.x - p.x, 0.0, p.x - (origin.x + l1)});
  const double dy = std::max({origin.y - p.y, 0.0, p.y - (origin.y + l2)});
  return std::hypot(dx, dy);
}

double PatchRegion::inward_depth(Vec2 p) const {
  if (!contains(p)) return 0.0;
  return std::min({p.x - origin.x, origin.x + l1 - p.x, p.y - origin.y, origin.y + l2 - p.y});
}

Vec2 PatchRegion::inward_normal(int side) const {
  switch (side) {
    case 0: return {1.0, 0.0};
    case 1: return {-1.0, 0.0};
    case 2: return {0.0, 1.0};
    default: return {0.0, -1.0};
  }
}

Vec2 PatchRegion::side_point(int side, double u) const {
  switch (side) {
    case 0: return {origin.x, origin.y + u};
    case 1: return {origin.x + l1, origin.y + u};
    case 2: return {origin.x + u, origin.y};
    default: return {origin.x + u, origin.y + l2};
  }
}

bool PatchRegion::overlaps(const PatchRegion& o) const {
  return origin.x < o.origin.x + o.l1 && o.origin.x < origin.x + l1 && origin.y < o.origin.y + o.l2 &&
         o.origin.y < origin.y + l2;
}

void validate(const PatchRegion& patch) {
  if (!(patch.l1 > 0.0)) throw ConfigError("patch.l1: must be positive");
  if (!(patch.l2 > 0.0)) throw ConfigError("patch.l2: must be positive");
  if (!(patch.margin > 0.0)) throw ConfigError("patch.margin: must be positive");
  if (!(patch.margin < 0.5 * std::min(patch.l1, patch.l2))) {
    throw ConfigError("patch.margin: must be less than half the shorter side");
  }
}

std::size_t ParticlePool::size() const {
  std::size_t n = 0;
  for (const auto& b : buckets_) n += b.size();
  return n;
}

void ParticlePool::clear() {
  for (auto& b : buckets_) b.clear();
}

InjectionLedger::InjectionLedger(std::size_t n)
    : accumulator(n, std::array<double, 4>{0.0, 0.0, 0.0, 0.0}),
      injected_groups(n, 0),
      injected_energy(n, 0.0),
      emitted_energy(n, 0.0),
      despawned_energy(n, 0.0) {}

double groups_per_step(const FrequencyBucket& bucket, double side_length, double dt, double g) {
  const double w = bucket.omega;
  return 4.0 * side_length * dt * w * w * w / (kPi * kPi * kPi * g);
}

double particle_energy(double amplitude, double radius, double rho, double g) {
  return 0.125 * rho * g * amplitude * amplitude * kPi * radius * radius;
}

double amplitude_for_energy(double energy, double radius, double rho, double g) {
  if (energy <= 0.0) return 0.0;
  return std::sqrt(8.0 * energy / (rho * g * kPi * radius * radius));
}

std::vector<WaveParticle> make_group(const PatchRegion& patch, const BucketTable& table,
                                     const DirectionalSpectrum& spectrum, int bucket, int side,
                                     double direction_offset, double time, std::mt19937_64& rng,
                                     const ParticleOptions& options, double* group_energy) {
  const FrequencyBucket& b = table[static_cast<std::size_t>(bucket)];
  const int n_theta = table.n_theta;
  const double dtheta = table.delta_theta();
  const Vec2 normal = patch.inward_normal(side);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<WaveParticle> out;
  out.reserve(static_cast<std::size_t>(2 * n_theta));
  double energy = 0.0;
  for (int j = 0; j < n_theta; ++j) {
    const double rel = -kPi + j * dtheta + direction_offset;
    const double amp = std::sqrt(2.0 * evaluate_2d(spectrum.params, b.omega, rel) * b.delta_omega * dtheta);
    // Draw the spawn position even for skipped members to keep the stream stable.
    const double u = unit(rng);
    if (amp == 0.0 && options.skip_zero_amplitude) continue;
    const Vec2 dir = from_angle(spectrum.mean_direction + rel);
    const int spawn_side = dot(dir, normal) >= 0.0 ? side : opposite_side(side);
    const Vec2 pos = patch.side_point(spawn_side, u * patch.side_length(spawn_side));

    WaveParticle crest;
    crest.position = pos;
    crest.direction = dir;
    crest.amplitude = amp;
    crest.birth_time = static_cast<float>(time);
    crest.bucket = static_cast<std::uint16_t>(bucket);
    crest.role = ParticleRole::kCrest;
    out.push_back(crest);
    energy += particle_energy(amp, b.radius, options.rho, table.g);

    if (options.trough_ratio != 0.0) {
      WaveParticle trough = crest;
      trough.position = pos - dir * b.radius;
      trough.amplitude = -options.trough_ratio * amp;
      trough.role = ParticleRole::kTrough;
      out.push_back(trough);
    }
  }
  if (group_energy != nullptr) *group_energy += energy;
  return out;
}

std::vector<WaveParticle> inject_bucket(const PatchRegion& patch, const BucketTable& table,
                                        const DirectionalSpectrum& spectrum, InjectionLedger& ledger,
                                        int bucket, double dt, double time, std::mt19937_64& rng,
                                        const ParticleOptions& options) {
  std::vector<WaveParticle> out;
  if (!(dt > 0.0)) return out;
  const auto bi = static_cast<std::size_t>(bucket);
  const FrequencyBucket& b = table[bi];
  const double half_dtheta = 0.5 * table.delta_theta();
  std::uniform_real_distribution<double> offset(-half_dtheta, half_dtheta);
  for (int side = 0; side < 4; ++side) {
    // One side carries half of its pair's rate.
    double& acc = ledger.accumulator[bi][static_cast<std::size_t>(side)];
    acc += 0.5 * groups_per_step(b, patch.side_length(side), dt, table.g);
    while (acc >= 1.0) {
      acc -= 1.0;
      double energy = 0.0;
      auto group = make_group(patch, table, spectrum, bucket, side, offset(rng), time, rng, options, &energy);
      out.insert(out.end(), group.begin(), group.end());
      ledger.injected_groups[bi] += 1;
      ledger.injected_energy[bi] += energy;
    }
  }
  return out;
}

std::vector<WaveParticle> inject(const PatchRegion& patch, const BucketTable& table,
                                 const DirectionalSpectrum& spectrum, InjectionLedger& ledger, double dt,
                                 double time, std::mt19937_64& rng, const ParticleOptions& options) {
  std::vector<WaveParticle> out;
  for (int b = 0; b < static_cast<int>(table.size()); ++b) {
    auto part = inject_bucket(patch, table, spectrum, ledger, b, dt, time, rng, options);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

namespace {

double crest_energy(const WaveParticle& p, const BucketTable& table, const ParticleOptions& options) {
  if (p.role != ParticleRole::kCrest) return 0.0;
  return particle_energy(p.amplitude, table[p.bucket].radius, options.rho, table.g);
}

}  // namespace

AdvectReport advect(ParticlePool& pool, double dt, const PatchRegion& patch, const BucketTable& table,
                    InjectionLedger& ledger, const ParticleOptions& options,
                    std::vector<WaveParticle>* removed) {
  AdvectReport report;
  const auto n_buckets = static_cast<long>(pool.bucket_count());
  std::vector<std::size_t> despawned(pool.bucket_count(), 0);
  std::vector<std::vector<WaveParticle>> gone(removed != nullptr ? pool.bucket_count() : 0);

#pragma omp parallel for schedule(dynamic)
  for (long bi = 0; bi < n_buckets; ++bi) {
    auto& particles = pool.bucket(static_cast<std::size_t>(bi));
    const FrequencyBucket& b = table[static_cast<std::size_t>(bi)];
    const double step = b.speed * dt;
    double lost = 0.0;
    std::size_t keep = 0;
    for (std::size_t i = 0; i < particles.size(); ++i) {
      WaveParticle p = particles[i];
      p.position += p.direction * step;
      if (patch.outside_distance(p.position) > b.radius) {
        lost += crest_energy(p, table, options);
        ++despawned[static_cast<std::size_t>(bi)];
        if (removed != nullptr) gone[static_cast<std::size_t>(bi)].push_back(p);
        continue;
      }
      particles[keep++] = p;
    }
    particles.resize(keep);
    ledger.despawned_energy[static_cast<std::size_t>(bi)] += lost;
  }
  for (std::size_t bi = 0; bi < despawned.size(); ++bi) {
    report.despawned += despawned[bi];
    if (removed != nullptr) removed->insert(removed->end(), gone[bi].begin(), gone[bi].end());
  }
  return report;
}

void prewarm(ParticlePool& pool, const PatchRegion& patch, const BucketTable& table,
             const DirectionalSpectrum& spectrum, InjectionLedger& ledger, double dt, double time,
             std::mt19937_64& rng, const ParticleOptions& options) {
  if (!(dt > 0.0)) throw ParameterError("prewarm: dt must be positive");
  const double diagonal = std::hypot(patch.l1, patch.l2);
  for (int bi = 0; bi < static_cast<int>(table.size()); ++bi) {
    const FrequencyBucket& b = table[static_cast<std::size_t>(bi)];
    const double window = (diagonal + 2.0 * b.radius) / b.speed;
    const long steps = static_cast<long>(std::ceil(window / dt));
    auto& dest = pool.bucket(static_cast<std::size_t>(bi));
    double lost = 0.0;
    for (long k = steps; k >= 1; --k) {
      const double spawn_time = time - static_cast<double>(k) * dt;
      auto fresh = inject_bucket(patch, table, spectrum, ledger, bi, dt, spawn_time, rng, options);
      const double travel = b.speed * dt * static_cast<double>(k);
      for (auto& p : fresh) {
        p.position += p.direction * travel;
        if (patch.outside_distance(p.position) > b.radius) {
          lost += crest_energy(p, table, options);
          continue;
        }
        dest.push_back(p);
      }
    }
    ledger.despawned_energy[static_cast<std::size_t>(bi)] += lost;
  }
}

std::vector<double> resident_energy(const ParticlePool& pool, const BucketTable& table,
                                    const ParticleOptions& options) {
  std::vector<double> out(pool.bucket_count(), 0.0);
  for (std::size_t bi = 0; bi < pool.bucket_count(); ++bi) {
    for (const auto& p : pool.bucket(bi)) out[bi] += crest_energy(p, table, options);
  }
  return out;
}

}  // namespace hocean
