#include "a2nlf/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "a2nlf/errors.hpp"
#include "a2nlf/model_io.hpp"
#include "a2nlf/rng.hpp"

namespace a2nlf {

Mode parse_mode(std::string_view name) {
  if (name == "anlf" || name == "anlf-fixed") return Mode::AnlfFixed;
  if (name == "a2nlf" || name == "a2nlf-adaptive") return Mode::A2nlfAdaptive;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Mode mode) { return mode == Mode::AnlfFixed ? "anlf" : "a2nlf"; }

Subset parse_subset(std::string_view name) {
  if (name == "train") return Subset::Train;
  if (name == "validation") return Subset::Validation;
  if (name == "test") return Subset::Test;
  throw ConfigError("unknown subset '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (rank < 1) throw ConfigError("rank must be at least 1");
  policy.validate();
  if (mode == Mode::AnlfFixed) {
    HyperParams(lambda, eta);
  } else {
    swarm.validate();
    if (swarm.size < 2) throw ConfigError("swarm size must be at least 2");
  }
  if (folds.empty()) throw ConfigError("no folds requested");
  std::set<std::size_t> seen;
  for (const std::size_t f : folds) {
    if (f >= kNumFolds) throw ConfigError("fold " + std::to_string(f) + " out of range 0..9");
    if (!seen.insert(f).second) throw ConfigError("fold " + std::to_string(f) + " requested twice");
  }
}

MeanStd mean_std(const std::vector<double>& values) {
  if (values.empty()) return {};
  long double sum = 0.0L;
  for (const double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  if (values.size() == 1) return {static_cast<double>(mean), 0.0};
  long double sq = 0.0L;
  for (const double v : values) sq += (v - mean) * (v - mean);
  return {static_cast<double>(mean),
          static_cast<double>(std::sqrt(sq / static_cast<long double>(values.size() - 1)))};
}

std::uint64_t split_seed(std::uint64_t global) { return derive_seed(global, seed_stream::kSplit); }
std::uint64_t init_seed(std::uint64_t global, std::size_t fold) {
  return derive_seed(global, seed_stream::kInitBase + fold);
}
std::uint64_t swarm_seed(std::uint64_t global, std::size_t fold) {
  return derive_seed(global, seed_stream::kSwarmBase + fold);
}

FoldRun run_fold(const HdiMatrix& matrix, const FoldPartition& partition, std::size_t fold,
                 const RunConfig& config, const StepObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  const DatasetSplit split = make_fold(matrix, partition, fold);

  FoldRun run;
  run.state = init_state(matrix.num_rows(), matrix.num_cols(), config.rank,
                         init_seed(config.seed, fold));
  SessionOptions options;
  options.policy = config.policy;
  options.metric = config.metric;
  if (config.clip) options.clip = value_range(split.train);
  options.observer = observer;

  try {
    if (config.mode == Mode::AnlfFixed) {
      run.report = train_fixed(run.state, split.train, split.validation,
                               HyperParams(config.lambda, config.eta), options);
    } else {
      Swarm swarm = init_swarm(config.swarm, swarm_seed(config.seed, fold));
      run.report = adaptive_train(run.state, split.train, split.validation, swarm, options);
    }
  } catch (const NumericError& e) {
    throw NumericError("fold " + std::to_string(fold) + ", " + e.what());
  }

  FoldResult& r = run.result;
  r.fold = fold;
  r.test_rmse = rmse(run.state, split.test, options.clip).value;
  r.test_mae = mae(run.state, split.test, options.clip).value;
  r.validation_m = run.report.records.back().validation_m;
  r.iterations = run.report.records.size();
  r.reason = run.report.reason;
  r.final_hyper = run.report.final_hyper;
  for (std::size_t u = 0; u < matrix.num_rows(); ++u) r.cold_rows += split.train.row_count(u) == 0;
  for (std::size_t i = 0; i < matrix.num_cols(); ++i) r.cold_cols += split.train.col_count(i) == 0;
  for (const Entry& e : split.test.entries())
    r.cold_test_entries += split.train.row_count(e.row) == 0 || split.train.col_count(e.col) == 0;
  r.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

std::string metrics_csv(const TrainReport& report) {
  std::string out = "iter,train_rmse,validation_m,lambda,eta,elapsed_ms\n";
  char line[256];
  for (const IterationRecord& r : report.records) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.train_rmse,
                  r.validation_m, r.lambda, r.eta, r.elapsed_ms);
    out += line;
  }
  return out;
}

namespace {

std::string fold_stem(const std::string& dir, std::size_t fold) {
  char name[32];
  std::snprintf(name, sizeof name, "fold_%02zu", fold);
  return (std::filesystem::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw DomainError("cannot write '" + path + "'");
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["data"] = c.data_path;
  j["sep"] = separator_name(c.sep);
  j["rank"] = c.rank;
  j["mode"] = to_string(c.mode);
  if (c.mode == Mode::AnlfFixed) {
    j["lambda"] = c.lambda;
    j["eta"] = c.eta;
  } else {
    j["swarm_size"] = c.swarm.size;
    j["inertia"] = c.swarm.inertia;
    j["accel1"] = c.swarm.accel_local;
    j["accel2"] = c.swarm.accel_global;
    j["lambda_bounds"] = {c.swarm.lambda.lo, c.swarm.lambda.hi};
    j["eta_bounds"] = {c.swarm.eta.lo, c.swarm.eta.hi};
    j["velocity_fraction"] = c.swarm.velocity_fraction;
    j["initial_best"] = c.swarm.initial_best;
  }
  j["tol"] = c.policy.tol;
  j["patience"] = c.policy.patience;
  j["max_iters"] = c.policy.max_iters;
  j["metric"] = to_string(c.metric);
  j["clip"] = c.clip;
  j["folds"] = c.folds;
  j["seed"] = c.seed;
  return j;
}

}  // namespace

std::string summary_json(const CvSummary& summary, const RunConfig& config) {
  nlohmann::ordered_json j;
  j["folds"] = nlohmann::ordered_json::array();
  for (const FoldResult& r : summary.folds) {
    nlohmann::ordered_json f;
    f["fold"] = r.fold;
    f["test_rmse"] = r.test_rmse;
    f["test_mae"] = r.test_mae;
    f["validation_m"] = r.validation_m;
    f["iterations"] = r.iterations;
    f["termination"] = to_string(r.reason);
    f["lambda"] = r.final_hyper.lambda;
    f["eta"] = r.final_hyper.eta;
    f["cold_rows"] = r.cold_rows;
    f["cold_cols"] = r.cold_cols;
    f["cold_test_entries"] = r.cold_test_entries;
    f["elapsed_seconds"] = r.elapsed_seconds;
    j["folds"].push_back(std::move(f));
  }
  j["test_rmse"] = {{"mean", summary.test_rmse.mean}, {"std", summary.test_rmse.stddev}};
  j["test_mae"] = {{"mean", summary.test_mae.mean}, {"std", summary.test_mae.stddev}};
  j["config"] = config_json(config);
  return j.dump(2) + "\n";
}

CvSummary run_cross_validation(const RunConfig& config, const RatingData& data) {
  config.validate();
  const FoldPartition partition = partition_entries(data.matrix, split_seed(config.seed));
  if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);

  CvSummary summary;
  std::vector<double> rmses;
  std::vector<double> maes;
  for (const std::size_t fold : config.folds) {
    FoldRun run = run_fold(data.matrix, partition, fold, config);
    if (!config.out_dir.empty()) {
      const std::string stem = fold_stem(config.out_dir, fold);
      write_text(stem + "_metrics.csv", metrics_csv(run.report));
      ModelArtifact model;
      model.state = std::move(run.state);
      model.row_ids = data.row_ids;
      model.col_ids = data.col_ids;
      model.split_seed = split_seed(config.seed);
      model.fold = fold;
      if (config.clip) model.clip = value_range(make_fold(data.matrix, partition, fold).train);
      save_model(stem + ".model", model);
    }
    rmses.push_back(run.result.test_rmse);
    maes.push_back(run.result.test_mae);
    summary.folds.push_back(run.result);
  }
  summary.test_rmse = mean_std(rmses);
  summary.test_mae = mean_std(maes);
  if (!config.out_dir.empty())
    write_text((std::filesystem::path(config.out_dir) / "summary.json").string(),
               summary_json(summary, config));
  return summary;
}

CvSummary run_cross_validation(const RunConfig& config) {
  config.validate();
  if (config.data_path.empty()) throw ConfigError("no data file given");
  return run_cross_validation(config, parse_ratings_file(config.data_path, config.sep));
}

EvaluationResult evaluate_model(const std::string& model_path, const RatingData& data,
                                Subset subset) {
  const ModelArtifact model = load_model(model_path);
  if (model.state.num_rows() != data.matrix.num_rows() ||
      model.state.num_cols() != data.matrix.num_cols())
    throw DomainError("model shape " + std::to_string(model.state.num_rows()) + "x" +
                      std::to_string(model.state.num_cols()) + " does not match dataset shape " +
                      std::to_string(data.matrix.num_rows()) + "x" +
                      std::to_string(data.matrix.num_cols()));
  if (model.row_ids != data.row_ids || model.col_ids != data.col_ids)
    throw DomainError("dataset ids do not match the model's id tables");
  if (model.fold >= kNumFolds) throw DomainError("model artifact names an invalid fold");

  const FoldPartition partition = partition_entries(data.matrix, model.split_seed);
  const DatasetSplit split = make_fold(data.matrix, partition, model.fold);
  const HdiMatrix& target =
      subset == Subset::Train ? split.train : (subset == Subset::Validation ? split.validation : split.test);
  if (target.empty()) throw DomainError("selected subset is empty");
  return {rmse(model.state, target, model.clip), mae(model.state, target, model.clip), model.fold};
}

}  // namespace a2nlf
