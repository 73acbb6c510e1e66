#include "a2nlf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "a2nlf/errors.hpp"

namespace a2nlf {

Metric parse_metric(std::string_view name) {
  if (name == "rmse" || name == "RMSE") return Metric::RMSE;
  if (name == "mae" || name == "MAE") return Metric::MAE;
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(Metric metric) { return metric == Metric::RMSE ? "rmse" : "mae"; }

namespace {

template <class Loss>
long double accumulate_loss(const FactorState& state, const HdiMatrix& target,
                            std::optional<ClipRange> clip, Loss loss) {
  if (target.empty()) throw DomainError("cannot score an empty entry set");
  if (state.num_rows() != target.num_rows() || state.num_cols() != target.num_cols())
    throw DomainError("target matrix shape does not match the factor state");
  long double sum = 0.0L;
  for (const Entry& e : target.entries()) {
    double yhat = predict_unchecked(state, e.row, e.col);
    if (clip) yhat = std::clamp(yhat, clip->lo, clip->hi);
    sum += loss(e.value - yhat);
  }
  return sum;
}

}  // namespace

MetricResult rmse(const FactorState& state, const HdiMatrix& target, std::optional<ClipRange> clip) {
  const long double sum = accumulate_loss(state, target, clip, [](double r) {
    return static_cast<long double>(r) * r;
  });
  const auto n = static_cast<long double>(target.size());
  return {Metric::RMSE, static_cast<double>(std::sqrt(sum / n)), target.size()};
}

MetricResult mae(const FactorState& state, const HdiMatrix& target, std::optional<ClipRange> clip) {
  const long double sum = accumulate_loss(state, target, clip, [](double r) {
    return static_cast<long double>(std::abs(r));
  });
  const auto n = static_cast<long double>(target.size());
  return {Metric::MAE, static_cast<double>(sum / n), target.size()};
}

MetricResult evaluate(Metric metric, const FactorState& state, const HdiMatrix& target,
                      std::optional<ClipRange> clip) {
  return metric == Metric::RMSE ? rmse(state, target, clip) : mae(state, target, clip);
}

ClipRange value_range(const HdiMatrix& matrix) {
  if (matrix.empty()) throw DomainError("value range of an empty matrix");
  const auto [lo, hi] = std::minmax_element(
      matrix.entries().begin(), matrix.entries().end(),
      [](const Entry& a, const Entry& b) { return a.value < b.value; });
  return {lo->value, hi->value};
}

}  // namespace a2nlf
