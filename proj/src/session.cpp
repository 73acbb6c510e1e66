#include "a2nlf/session.hpp"

#include <chrono>
#include <string>

#include "a2nlf/errors.hpp"

namespace a2nlf {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_inputs(const FactorState& state, const HdiMatrix& train, const HdiMatrix& validation,
                  const SessionOptions& options) {
  options.policy.validate();
  check_shape(state, train);
  check_shape(state, validation);
  if (train.empty()) throw DomainError("training set is empty");
  if (validation.empty()) throw DomainError("validation set is empty");
}

[[noreturn]] void rethrow_at(std::size_t iter, const NumericError& e) {
  throw NumericError("iteration " + std::to_string(iter) + ": " + e.what());
}

}  // namespace

TrainReport train_fixed(FactorState& state, const HdiMatrix& train, const HdiMatrix& validation,
                        const HyperParams& hp, const SessionOptions& options) {
  check_inputs(state, train, validation, options);
  const HyperPoint applied{hp.lambda(), hp.eta()};
  TrainReport report;
  report.final_hyper = applied;
  std::vector<double> history;
  std::vector<double> workspace;
  const auto start = Clock::now();

  for (std::size_t iter = 1;; ++iter) {
    double m = 0.0;
    try {
      train_iteration(state, train, hp, workspace);
      m = evaluate(options.metric, state, validation, options.clip).value;
    } catch (const NumericError& e) {
      rethrow_at(iter, e);
    }
    if (options.observer) options.observer({iter, 0, applied, m}, state, nullptr);

    const double train_err = rmse(state, train, options.clip).value;
    history.push_back(train_err);
    report.records.push_back({iter, train_err, m, applied.lambda, applied.eta, ms_since(start)});
    if (const auto stop = check_termination(history, options.policy)) {
      report.reason = *stop;
      return report;
    }
  }
}

TrainReport adaptive_train(FactorState& state, const HdiMatrix& train, const HdiMatrix& validation,
                           Swarm& swarm, const SessionOptions& options) {
  check_inputs(state, train, validation, options);
  if (swarm.particles.empty()) throw ConfigError("swarm has no particles");
  TrainReport report;
  std::vector<double> history;
  std::vector<double> workspace;
  const auto start = Clock::now();

  for (std::size_t iter = 1;; ++iter) {
    double last_m = 0.0;
    for (std::size_t q = 0; q < swarm.particles.size(); ++q) {
      const HyperPoint applied = swarm.particles[q].position;
      try {
        train_iteration(state, train, HyperParams(applied.lambda, applied.eta), workspace);
        last_m = evaluate(options.metric, state, validation, options.clip).value;
        measure_and_update(swarm, q, last_m);
      } catch (const NumericError& e) {
        rethrow_at(iter, e);
      }
      evolve_particle(swarm, q);
      if (options.observer) options.observer({iter, q, applied, last_m}, state, &swarm);
    }

    const double train_err = rmse(state, train, options.clip).value;
    history.push_back(train_err);
    const HyperPoint best = swarm.has_gbest() ? swarm.gbest : swarm.particles.back().position;
    report.records.push_back({iter, train_err, last_m, best.lambda, best.eta, ms_since(start)});
    if (const auto stop = check_termination(history, options.policy)) {
      report.reason = *stop;
      report.final_hyper = best;
      return report;
    }
  }
}

}  // namespace a2nlf
