// Command-line front end: train, evaluate, split-preview.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "a2nlf/errors.hpp"
#include "a2nlf/harness.hpp"

namespace {

using namespace a2nlf;

Interval parse_interval(const std::string& text, const char* flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError(std::string(flag) + " expects lo:hi");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ConfigError(std::string(flag) + " expects numeric lo:hi, got '" + text + "'");
  }
}

// "all", "3", "0,2,5" or "0-4".
std::vector<std::size_t> parse_folds(const std::string& text) {
  if (text == "all") return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<std::size_t> folds;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        folds.push_back(std::stoul(item));
      } else {
        const std::size_t lo = std::stoul(item.substr(0, dash));
        const std::size_t hi = std::stoul(item.substr(dash + 1));
        for (std::size_t f = lo; f <= hi; ++f) folds.push_back(f);
      }
    }
  } catch (const std::exception&) {
    throw ConfigError("bad --folds value '" + text + "'");
  }
  return folds;
}

struct TrainFlags {
  std::string sep = "dcolon";
  std::string mode = "a2nlf";
  std::string metric = "rmse";
  std::string lambda_bounds;
  std::string eta_bounds;
  std::string folds = "all";
};

int run_train(RunConfig config, const TrainFlags& flags) {
  config.sep = parse_separator(flags.sep);
  config.mode = parse_mode(flags.mode);
  config.metric = parse_metric(flags.metric);
  if (!flags.lambda_bounds.empty())
    config.swarm.lambda = parse_interval(flags.lambda_bounds, "--lambda-bounds");
  if (!flags.eta_bounds.empty()) config.swarm.eta = parse_interval(flags.eta_bounds, "--eta-bounds");
  config.folds = parse_folds(flags.folds);
  config.validate();
  if (config.data_path.empty()) throw ConfigError("--data is required (flag or config key)");

  const RatingData data = parse_ratings_file(config.data_path, config.sep);
  const CvSummary summary = run_cross_validation(config, data);
  for (const FoldResult& r : summary.folds)
    std::fprintf(stderr, "fold %zu: test_rmse=%.6f test_mae=%.6f iters=%zu (%s) lambda=%.5g eta=%.5g cold_test=%zu %.1fs\n",
                r.fold, r.test_rmse, r.test_mae, r.iterations, std::string(to_string(r.reason)).c_str(),
                r.final_hyper.lambda, r.final_hyper.eta, r.cold_test_entries, r.elapsed_seconds);
  std::fprintf(stderr, "test RMSE %.6f +- %.2e, MAE %.6f +- %.2e over %zu fold(s)\n", summary.test_rmse.mean,
              summary.test_rmse.stddev, summary.test_mae.mean, summary.test_mae.stddev,
              summary.folds.size());
  if (config.out_dir.empty()) std::cout << summary_json(summary, config);
  return 0;
}

int run_evaluate(const std::string& model, const std::string& data_path, const std::string& sep,
                 const std::string& subset) {
  const RatingData data = parse_ratings_file(data_path, parse_separator(sep));
  const EvaluationResult r = evaluate_model(model, data, parse_subset(subset));
  std::printf("fold %llu %s: rmse=%.17g mae=%.17g count=%zu\n",
              static_cast<unsigned long long>(r.fold), subset.c_str(), r.rmse.value, r.mae.value,
              r.rmse.count);
  return 0;
}

int run_split_preview(const std::string& data_path, const std::string& sep, std::uint64_t seed) {
  const RatingData data = parse_ratings_file(data_path, parse_separator(sep));
  const HdiMatrix& m = data.matrix;
  std::printf("rows=%zu cols=%zu entries=%zu density=%.6g\n", m.num_rows(), m.num_cols(), m.size(),
              density(m));
  const FoldPartition partition = partition_entries(m, split_seed(seed));
  for (std::size_t f = 0; f < kNumFolds; ++f) {
    const DatasetSplit split = make_fold(m, partition, f);
    std::size_t cold_rows = 0, cold_cols = 0;
    for (std::size_t u = 0; u < m.num_rows(); ++u) cold_rows += split.train.row_count(u) == 0;
    for (std::size_t i = 0; i < m.num_cols(); ++i) cold_cols += split.train.col_count(i) == 0;
    std::printf("fold %zu: train=%zu validation=%zu test=%zu cold_rows=%zu cold_cols=%zu\n", f,
                split.train.size(), split.validation.size(), split.test.size(), cold_rows, cold_cols);
  }
  return 0;
}

// Fills every option still unset after command-line parsing from the file, so
// flags take precedence. Keys are option names without the leading dashes.
void apply_config_file(CLI::App& cmd, const std::string& path) {
  for (const CLI::ConfigItem& item : CLI::ConfigTOML().from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() || item.name == "config")
      throw ConfigError(path + ": unsupported key '" + item.fullname() + "'");
    CLI::Option* opt = cmd.get_option_no_throw("--" + item.name);
    if (opt == nullptr) throw ConfigError(path + ": unknown key '" + item.name + "'");
    if (opt->count() > 0) continue;
    std::vector<std::string> inputs = item.inputs;
    if (opt->get_type_size() == 0) {
      // Flag: accept true/false.
      if (inputs.size() != 1 || (inputs[0] != "true" && inputs[0] != "false"))
        throw ConfigError(path + ": '" + item.name + "' must be true or false");
      if (inputs[0] == "false") continue;
      inputs = {"true"};
    }
    for (const std::string& v : inputs) opt->add_result(v);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonnegative latent factor learning with swarm-adapted ADMM"};
  app.require_subcommand(1);

  RunConfig config;
  TrainFlags flags;
  auto* train = app.add_subcommand("train", "Ten-fold cross-validated training");
  std::string config_path;
  train->add_option("--config", config_path, "TOML key = value file; flags override it");
  train->add_option("--data", config.data_path, "Ratings file");
  train->add_option("--sep", flags.sep, "Field separator: dcolon|tab|comma|space");
  train->add_option("--rank", config.rank, "Latent dimension d");
  train->add_option("--mode", flags.mode, "anlf (fixed) or a2nlf (adaptive)");
  train->add_option("--lambda", config.lambda, "Fixed lambda (anlf mode)");
  train->add_option("--eta", config.eta, "Fixed eta (anlf mode)");
  train->add_option("--swarm-size", config.swarm.size, "Particles Q");
  train->add_option("--inertia", config.swarm.inertia, "Inertia weight w");
  train->add_option("--accel1", config.swarm.accel_local, "Personal-best acceleration b1");
  train->add_option("--accel2", config.swarm.accel_global, "Global-best acceleration b2");
  train->add_option("--lambda-bounds", flags.lambda_bounds, "lambda search range lo:hi");
  train->add_option("--eta-bounds", flags.eta_bounds, "eta search range lo:hi");
  train->add_option("--tol", config.policy.tol, "Training-error difference threshold");
  train->add_option("--patience", config.policy.patience, "Consecutive increases before stopping");
  train->add_option("--max-iters", config.policy.max_iters, "Iteration budget");
  train->add_option("--metric", flags.metric, "Validation metric: rmse|mae");
  train->add_flag("--clip", config.clip, "Clamp predictions to the training rating range");
  train->add_option("--folds", flags.folds, "Folds to run: all, a single index, a,b,c or lo-hi");
  train->add_option("--seed", config.seed, "Global seed");
  train->add_option("--out", config.out_dir, "Output directory");

  std::string model_path, eval_data, eval_sep = "dcolon", subset = "test";
  auto* evaluate = app.add_subcommand("evaluate", "Re-score a saved fold model");
  evaluate->add_option("--model", model_path, "Model artifact")->required();
  evaluate->add_option("--data", eval_data, "Ratings file")->required();
  evaluate->add_option("--sep", eval_sep, "Field separator");
  evaluate->add_option("--subset", subset, "train|validation|test");

  std::string preview_data, preview_sep = "dcolon";
  std::uint64_t preview_seed = 42;
  auto* preview = app.add_subcommand("split-preview", "Show the ten-fold split sizes");
  preview->add_option("--data", preview_data, "Ratings file")->required();
  preview->add_option("--sep", preview_sep, "Field separator");
  preview->add_option("--seed", preview_seed, "Global seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*train && !config_path.empty()) apply_config_file(*train, config_path);
    if (*train) return run_train(config, flags);
    if (*evaluate) return run_evaluate(model_path, eval_data, eval_sep, subset);
    return run_split_preview(preview_data, preview_sep, preview_seed);
  } catch (const CLI::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
