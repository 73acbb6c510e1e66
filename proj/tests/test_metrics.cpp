#include <doctest.h>

#include <cmath>

#include "a2nlf/errors.hpp"
#include "a2nlf/metrics.hpp"
#include "oracle.hpp"

using namespace a2nlf;

namespace {

// Rank-1 state predicting `preds[u]` for row u, column 0.
FactorState predicting(const std::vector<double>& preds) {
  FactorState s = init_state(preds.size(), 1, 1, 0);
  for (std::size_t u = 0; u < preds.size(); ++u) s.A(u, 0) = preds[u];
  s.X(0, 0) = 1.0;
  return s;
}

}  // namespace

TEST_CASE("rmse and mae on hand-computed sets") {
  const FactorState exact = predicting({1.0});
  const HdiMatrix one(1, 1, {{0, 0, 1.0}});
  CHECK(rmse(exact, one).value == 0.0);
  CHECK(mae(exact, one).value == 0.0);

  const FactorState s = predicting({1.0, 3.0});
  const HdiMatrix two(2, 1, {{0, 0, 3.0}, {1, 0, 1.0}});
  const MetricResult r = rmse(s, two);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.count == 2);
  CHECK(r.metric == Metric::RMSE);
  CHECK(mae(s, two).value == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(evaluate(Metric::MAE, s, two).metric == Metric::MAE);
}

TEST_CASE("metric preconditions") {
  const FactorState s = predicting({1.0, 2.0});
  CHECK_THROWS_AS(rmse(s, HdiMatrix(2, 1, {})), DomainError);
  CHECK_THROWS_AS(mae(s, HdiMatrix(2, 1, {})), DomainError);
  CHECK_THROWS_AS(rmse(s, HdiMatrix(3, 1, {{0, 0, 1.0}})), DomainError);
  CHECK(parse_metric("mae") == Metric::MAE);
  CHECK_THROWS_AS(parse_metric("ndcg"), ConfigError);
}

TEST_CASE("clipping clamps predictions into the range") {
  const FactorState s = predicting({0.0, 9.0});
  const HdiMatrix m(2, 1, {{0, 0, 1.0}, {1, 0, 5.0}});
  CHECK(rmse(s, m, ClipRange{1.0, 5.0}).value == 0.0);
  const ClipRange range = value_range(m);
  CHECK(range.lo == 1.0);
  CHECK(range.hi == 5.0);
}

TEST_CASE("metric properties on random state/target pairs") {
  Rng rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 1 + rng.below(10), cols = 1 + rng.below(10);
    HdiMatrix target = oracle::random_matrix(rng, rows, cols, 0.5);
    if (target.empty()) target = HdiMatrix(rows, cols, {{0, 0, 2.5}});
    FactorState s = init_state(rows, cols, 1 + rng.below(4), trial);
    for (double& v : s.A.data()) v = 2 * rng.uniform();
    for (double& v : s.X.data()) v = 2 * rng.uniform();

    const double r = rmse(s, target).value;
    const double a = mae(s, target).value;
    CHECK(a <= r + 1e-15);

    double sq = 0.0;
    for (const Entry& e : target.entries()) {
      double dot = 0.0;
      for (std::size_t k = 0; k < s.rank; ++k) dot += s.A(e.row, k) * s.X(e.col, k);
      sq += (e.value - dot) * (e.value - dot);
    }
    CHECK(r * r * target.size() == doctest::Approx(sq).epsilon(1e-12));

    // Same set, different storage order.
    std::vector<Entry> reversed(target.entries().rbegin(), target.entries().rend());
    const HdiMatrix shuffled = HdiMatrix(rows, cols, reversed).transposed().transposed();
    CHECK(rmse(s, shuffled).value == doctest::Approx(r).epsilon(1e-10));
  }
}
