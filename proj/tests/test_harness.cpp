#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "a2nlf/errors.hpp"
#include "a2nlf/harness.hpp"
#include "a2nlf/model_io.hpp"

using namespace a2nlf;
namespace fs = std::filesystem;

namespace {

const std::string kData = std::string(A2NLF_TEST_DATA_DIR) + "/synthetic_ratings.dat";

RunConfig quick_config(Mode mode, const std::string& out) {
  RunConfig c;
  c.data_path = kData;
  c.rank = 3;
  c.mode = mode;
  c.swarm.size = 4;
  c.policy.max_iters = 30;
  c.out_dir = out;
  c.seed = 2024;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("a2nlf_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json without_timing(nlohmann::json j) {
  for (auto& f : j["folds"]) f.erase("elapsed_seconds");
  return j;
}

}  // namespace

TEST_CASE("RunConfig validation") {
  RunConfig c;
  c.mode = Mode::AnlfFixed;
  c.lambda = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.lambda = 0.5;
  CHECK_NOTHROW(c.validate());
  c.folds = {3, 3};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.folds = {10};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.folds = {0};
  c.rank = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  RunConfig adaptive;
  adaptive.swarm.size = 1;
  CHECK_THROWS_AS(adaptive.validate(), ConfigError);
  CHECK(parse_mode("anlf") == Mode::AnlfFixed);
  CHECK(parse_mode("a2nlf") == Mode::A2nlfAdaptive);
  CHECK_THROWS_AS(parse_mode("nmc"), ConfigError);
}

TEST_CASE("mean_std") {
  const MeanStd one = mean_std({2.0});
  CHECK(one.mean == 2.0);
  CHECK(one.stddev == 0.0);
  const MeanStd two = mean_std({1.0, 3.0});
  CHECK(two.mean == 2.0);
  CHECK(two.stddev == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("sub-seeds are distinct per stream and fold") {
  CHECK(split_seed(1) != split_seed(2));
  CHECK(init_seed(1, 0) != init_seed(1, 1));
  CHECK(init_seed(1, 0) != swarm_seed(1, 0));
  CHECK(split_seed(5) == split_seed(5));
}

TEST_CASE("ten-fold run writes per-fold artifacts and a reproducible summary") {
  const fs::path out1 = scratch("cv1"), out2 = scratch("cv2");
  const CvSummary s1 = run_cross_validation(quick_config(Mode::A2nlfAdaptive, out1.string()));
  run_cross_validation(quick_config(Mode::A2nlfAdaptive, out2.string()));

  REQUIRE(s1.folds.size() == 10);
  const auto j1 = nlohmann::json::parse(read_file(out1 / "summary.json"));
  const auto j2 = nlohmann::json::parse(read_file(out2 / "summary.json"));
  CHECK(j1["folds"].size() == 10);
  CHECK(j1["test_rmse"].contains("mean"));
  CHECK(j1["test_rmse"].contains("std"));
  CHECK(j1["config"]["mode"] == "a2nlf");
  CHECK(without_timing(j1).dump() == without_timing(j2).dump());

  for (std::size_t f = 0; f < 10; ++f) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "fold_%02zu", f);
    CHECK(fs::exists(out1 / (std::string(stem) + ".model")));
    const std::string csv = read_file(out1 / (std::string(stem) + "_metrics.csv"));
    CHECK(csv.rfind("iter,train_rmse,validation_m,lambda,eta,elapsed_ms\n", 0) == 0);
  }
  CHECK(s1.test_rmse.mean > 0.0);
  CHECK(s1.test_rmse.mean < 1.5);
  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("evaluate_model reproduces training-time metrics") {
  const fs::path out = scratch("eval");
  RunConfig config = quick_config(Mode::AnlfFixed, out.string());
  config.folds = {2, 5};
  config.clip = true;
  const CvSummary summary = run_cross_validation(config);
  const RatingData data = parse_ratings_file(kData, Separator::DoubleColon);

  for (const FoldResult& r : summary.folds) {
    char name[32];
    std::snprintf(name, sizeof name, "fold_%02zu.model", r.fold);
    const EvaluationResult e = evaluate_model((out / name).string(), data, Subset::Test);
    CHECK(e.fold == r.fold);
    CHECK(std::abs(e.rmse.value - r.test_rmse) <= 1e-10);
    CHECK(std::abs(e.mae.value - r.test_mae) <= 1e-10);
  }

  // A dataset with a different shape is refused.
  std::istringstream other("1::1::3\n2::2::4\n3::3::5\n4::4::1\n5::5::2\n6::6::3\n7::7::4\n8::8::5\n9::9::1\n10::10::2\n");
  const RatingData mismatched = parse_ratings(other, Separator::DoubleColon);
  CHECK_THROWS_AS(evaluate_model((out / "fold_02.model").string(), mismatched, Subset::Test), DomainError);
  CHECK_THROWS_AS(evaluate_model((out / "missing.model").string(), data, Subset::Test), DomainError);
  fs::remove_all(out);
}

TEST_CASE("metrics_csv uses 17 significant digits") {
  TrainReport report;
  report.records.push_back({1, 0.1, 0.2, 0.5, 1.0, 3.0});
  CHECK(metrics_csv(report) ==
        "iter,train_rmse,validation_m,lambda,eta,elapsed_ms\n"
        "1,0.10000000000000001,0.20000000000000001,0.5,1,3\n");
}
