#include "a2nlf/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "a2nlf/errors.hpp"

namespace a2nlf {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void check_interval(const Interval& range, const char* name) {
  if (!(std::isfinite(range.lo) && std::isfinite(range.hi) && range.lo > 0.0 && range.lo < range.hi))
    throw ConfigError(std::string(name) + " bounds must satisfy 0 < lo < hi");
}

bool inside(const Interval& range, double v) { return v >= range.lo && v <= range.hi; }

}  // namespace

void SwarmConfig::validate() const {
  if (size < 1) throw ConfigError("swarm needs at least one particle");
  check_interval(lambda, "lambda");
  check_interval(eta, "eta");
  if (!finite_nonneg(inertia) || !finite_nonneg(accel_local) || !finite_nonneg(accel_global))
    throw ConfigError("inertia and acceleration coefficients must be finite and nonnegative");
  if (!(std::isfinite(velocity_fraction) && velocity_fraction > 0.0))
    throw ConfigError("velocity fraction must be positive");
  if (!(std::isfinite(initial_best) && initial_best > 0.0))
    throw ConfigError("initial best error must be positive");
}

HyperPoint SwarmConfig::velocity_limit() const {
  return {velocity_fraction * (lambda.hi - lambda.lo), velocity_fraction * (eta.hi - eta.lo)};
}

Swarm init_swarm(const SwarmConfig& config, std::uint64_t seed) {
  config.validate();
  if (config.size < 2) throw ConfigError("swarm size must be at least 2");
  Swarm swarm;
  swarm.config = config;
  swarm.f_hat = config.initial_best;
  swarm.rng = Rng(seed);
  swarm.particles.resize(config.size);
  for (Particle& p : swarm.particles) {
    p.position.lambda = config.lambda.lo + swarm.rng.uniform() * (config.lambda.hi - config.lambda.lo);
    p.position.eta = config.eta.lo + swarm.rng.uniform() * (config.eta.hi - config.eta.lo);
    p.pbest = p.position;
  }
  return swarm;
}

Swarm make_swarm(const SwarmConfig& config, std::vector<Particle> particles, std::uint64_t seed) {
  config.validate();
  if (particles.empty()) throw ConfigError("swarm needs at least one particle");
  for (const Particle& p : particles) {
    if (!inside(config.lambda, p.position.lambda) || !inside(config.eta, p.position.eta))
      throw ConfigError("particle position outside the configured bounds");
  }
  Swarm swarm;
  swarm.config = config;
  swarm.config.size = particles.size();
  swarm.particles = std::move(particles);
  swarm.f_hat = config.initial_best;
  swarm.rng = Rng(seed);
  return swarm;
}

void evolve_particle(Swarm& swarm, std::size_t q, const EvolveDraws& draws) {
  const SwarmConfig& c = swarm.config;
  Particle& p = swarm.particles.at(q);
  const HyperPoint social = swarm.has_gbest() ? swarm.gbest : p.pbest;
  const HyperPoint vmax = c.velocity_limit();

  const auto step = [&](double v, double s, double pbest, double gbest, double r1, double r2,
                        double limit) {
    const double next = c.inertia * v + c.accel_local * r1 * (pbest - s) + c.accel_global * r2 * (gbest - s);
    return std::clamp(next, -limit, limit);
  };
  p.velocity.lambda = step(p.velocity.lambda, p.position.lambda, p.pbest.lambda, social.lambda,
                           draws.r1.lambda, draws.r2.lambda, vmax.lambda);
  p.velocity.eta = step(p.velocity.eta, p.position.eta, p.pbest.eta, social.eta, draws.r1.eta,
                        draws.r2.eta, vmax.eta);
  p.position.lambda = std::clamp(p.position.lambda + p.velocity.lambda, c.lambda.lo, c.lambda.hi);
  p.position.eta = std::clamp(p.position.eta + p.velocity.eta, c.eta.lo, c.eta.hi);
}

void evolve_particle(Swarm& swarm, std::size_t q) {
  EvolveDraws draws;
  draws.r1.lambda = swarm.rng.uniform_open();
  draws.r1.eta = swarm.rng.uniform_open();
  draws.r2.lambda = swarm.rng.uniform_open();
  draws.r2.eta = swarm.rng.uniform_open();
  evolve_particle(swarm, q, draws);
}

void measure_and_update(Swarm& swarm, std::size_t q, double m) {
  if (!finite_nonneg(m))
    throw NumericError("particle " + std::to_string(q) + " measured a non-finite or negative error");
  Particle& p = swarm.particles.at(q);
  if (m < p.pbest_m) {
    p.pbest = p.position;
    p.pbest_m = m;
  }
  if (m < swarm.f_hat) {
    swarm.f_hat = m;
    swarm.gbest = p.position;
    swarm.gbest_m = m;
  }
}

}  // namespace a2nlf
