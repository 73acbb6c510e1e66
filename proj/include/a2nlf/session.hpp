#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "a2nlf/admm.hpp"
#include "a2nlf/metrics.hpp"
#include "a2nlf/sparse_data.hpp"
#include "a2nlf/swarm.hpp"

namespace a2nlf {

/// One outer iteration. In adaptive mode lambda/eta are the swarm's global
/// best after the sweep; in fixed mode the constant pair.
struct IterationRecord {
  std::size_t iter = 0;
  double train_rmse = 0.0;
  double validation_m = 0.0;
  double lambda = 0.0;
  double eta = 0.0;
  double elapsed_ms = 0.0;
};

struct TrainReport {
  std::vector<IterationRecord> records;
  StopReason reason = StopReason::MaxIters;
  HyperPoint final_hyper;
};

/// Emitted after every single train_iteration: which outer iteration and
/// particle (0 in fixed mode), the hyper-parameters applied and the resulting
/// validation error.
struct StepInfo {
  std::size_t iter = 0;
  std::size_t particle = 0;
  HyperPoint applied;
  double validation_m = 0.0;
};

using StepObserver = std::function<void(const StepInfo&, const FactorState&, const Swarm*)>;

struct SessionOptions {
  TerminationPolicy policy;
  Metric metric = Metric::RMSE;
  std::optional<ClipRange> clip;
  StepObserver observer;
};

/// Fixed-hyper-parameter training: one train_iteration per outer iteration
/// until check_termination stops on the training RMSE history.
TrainReport train_fixed(FactorState& state, const HdiMatrix& train, const HdiMatrix& validation,
                        const HyperParams& hp, const SessionOptions& options);

/// Swarm-adapted training on one shared factor state. Each outer iteration
/// sweeps the particles in order; for particle q it runs one train_iteration
/// at q's position, measures the validation error, updates the bests and
/// evolves q. Termination is checked on the training RMSE after each sweep.
TrainReport adaptive_train(FactorState& state, const HdiMatrix& train, const HdiMatrix& validation,
                           Swarm& swarm, const SessionOptions& options);

}  // namespace a2nlf
