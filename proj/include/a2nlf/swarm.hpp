#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "a2nlf/rng.hpp"

namespace a2nlf {

/// A point in the (lambda, eta) search plane; also used for velocities.
struct HyperPoint {
  double lambda = 0.0;
  double eta = 0.0;

  bool operator==(const HyperPoint&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SwarmConfig {
  std::size_t size = 10;
  double inertia = 0.729;
  double accel_local = 1.496;
  double accel_global = 1.496;
  Interval lambda{0x1.0p-8, 4.0};
  Interval eta{0x1.0p-8, 1.618};
  /// Velocity bound per component, as a fraction of the position range.
  double velocity_fraction = 0.2;
  /// Starting value of the best-error tracker.
  double initial_best = 100.0;

  /// Throws ConfigError unless size >= 1, 0 < lo < hi for both intervals and
  /// the remaining coefficients are finite and nonnegative (fraction > 0).
  void validate() const;

  /// Upper velocity bound; the lower bound is its negation.
  HyperPoint velocity_limit() const;
};

struct Particle {
  HyperPoint velocity;
  HyperPoint position;
  HyperPoint pbest;
  double pbest_m = std::numeric_limits<double>::infinity();
};

/// Swarm state for hyper-parameter adaptation.
///
/// `f_hat` is the running minimum of every validation error measured so far,
/// starting at config.initial_best. `gbest` is the position that produced it;
/// it is unset (gbest_m infinite) until some measurement beats initial_best.
struct Swarm {
  SwarmConfig config;
  std::vector<Particle> particles;
  HyperPoint gbest;
  double gbest_m = std::numeric_limits<double>::infinity();
  double f_hat = 100.0;
  Rng rng{0};

  bool has_gbest() const noexcept { return gbest_m < std::numeric_limits<double>::infinity(); }
};

/// Q >= 2 particles at uniform positions within the bounds, zero velocity,
/// pbest at the start position with an infinite error sentinel.
Swarm init_swarm(const SwarmConfig& config, std::uint64_t seed);

/// Swarm over caller-chosen particles (any count >= 1). Positions must lie
/// within the bounds.
Swarm make_swarm(const SwarmConfig& config, std::vector<Particle> particles, std::uint64_t seed);

/// Random coefficients of one velocity update, one per component.
struct EvolveDraws {
  HyperPoint r1;
  HyperPoint r2;
};

/// v <- w v + b1 r1 (pbest - s) + b2 r2 (gbest - s), clamped to the velocity
/// bounds; then s <- s + v, clamped to the position bounds. Until a global
/// best exists the particle's own best stands in for it.
void evolve_particle(Swarm& swarm, std::size_t q, const EvolveDraws& draws);
/// Same, with r1 and r2 drawn from the swarm's generator in (0, 1).
void evolve_particle(Swarm& swarm, std::size_t q);

/// Records validation error m for particle q at its current position. A
/// strictly smaller m replaces the particle's best; a value strictly below
/// f_hat replaces f_hat and the global best. Throws NumericError when m is
/// negative or not finite.
void measure_and_update(Swarm& swarm, std::size_t q, double m);

}  // namespace a2nlf
