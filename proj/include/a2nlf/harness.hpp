#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "a2nlf/admm.hpp"
#include "a2nlf/metrics.hpp"
#include "a2nlf/session.hpp"
#include "a2nlf/sparse_data.hpp"
#include "a2nlf/swarm.hpp"

namespace a2nlf {

enum class Mode { AnlfFixed, A2nlfAdaptive };

Mode parse_mode(std::string_view name);
std::string_view to_string(Mode mode);

struct RunConfig {
  std::string data_path;
  Separator sep = Separator::DoubleColon;
  std::size_t rank = 20;
  Mode mode = Mode::A2nlfAdaptive;
  double lambda = 0.5;  // anlf mode only
  double eta = 1.0;     // anlf mode only
  SwarmConfig swarm;
  TerminationPolicy policy;
  Metric metric = Metric::RMSE;
  bool clip = false;
  std::vector<std::size_t> folds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string out_dir;
  std::uint64_t seed = 42;

  /// Throws ConfigError on any invalid field.
  void validate() const;
};

struct FoldResult {
  std::size_t fold = 0;
  double test_rmse = 0.0;
  double test_mae = 0.0;
  double validation_m = 0.0;
  std::size_t iterations = 0;
  StopReason reason = StopReason::MaxIters;
  HyperPoint final_hyper;
  std::size_t cold_rows = 0;
  std::size_t cold_cols = 0;
  std::size_t cold_test_entries = 0;
  double elapsed_seconds = 0.0;
};

struct FoldRun {
  FoldResult result;
  FactorState state;
  TrainReport report;
};

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single fold
};

MeanStd mean_std(const std::vector<double>& values);

struct CvSummary {
  std::vector<FoldResult> folds;
  MeanStd test_rmse;
  MeanStd test_mae;
};

/// Seeds every run derives from the global seed.
std::uint64_t split_seed(std::uint64_t global);
std::uint64_t init_seed(std::uint64_t global, std::size_t fold);
std::uint64_t swarm_seed(std::uint64_t global, std::size_t fold);

/// Trains and scores one fold. Numeric failures are rethrown as NumericError
/// naming the fold.
FoldRun run_fold(const HdiMatrix& matrix, const FoldPartition& partition, std::size_t fold,
                 const RunConfig& config, const StepObserver& observer = {});

/// Runs every requested fold. When config.out_dir is set, writes
/// fold_<f>_metrics.csv, fold_<f>.model and summary.json there.
CvSummary run_cross_validation(const RunConfig& config, const RatingData& data);
CvSummary run_cross_validation(const RunConfig& config);

/// Summary document: per-fold records, mean/std of test RMSE and MAE, and the
/// resolved config. Per-fold "elapsed_seconds" is the only timing field.
std::string summary_json(const CvSummary& summary, const RunConfig& config);

/// Per-iteration CSV: iter,train_rmse,validation_m,lambda,eta,elapsed_ms with
/// 17 significant digits.
std::string metrics_csv(const TrainReport& report);

enum class Subset { Train, Validation, Test };
Subset parse_subset(std::string_view name);

struct EvaluationResult {
  MetricResult rmse;
  MetricResult mae;
  std::uint64_t fold = 0;
};

/// Re-scores a saved fold model against its dataset. The dataset must parse
/// to exactly the artifact's id tables; the split is regenerated from the
/// artifact's split seed and fold. Throws DomainError on any mismatch or an
/// empty subset.
EvaluationResult evaluate_model(const std::string& model_path, const RatingData& data,
                                Subset subset);

}  // namespace a2nlf
