#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "a2nlf/admm.hpp"
#include "a2nlf/sparse_data.hpp"

namespace a2nlf {

enum class Metric { RMSE, MAE };

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric);

struct MetricResult {
  Metric metric = Metric::RMSE;
  double value = 0.0;
  std::size_t count = 0;
};

/// Optional clamp applied to predictions before scoring.
struct ClipRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Error of <A_u, X_i> against every entry of `target`. Sums are accumulated
/// in long double. Throws DomainError on an empty target or a shape mismatch.
MetricResult rmse(const FactorState& state, const HdiMatrix& target,
                  std::optional<ClipRange> clip = std::nullopt);
MetricResult mae(const FactorState& state, const HdiMatrix& target,
                 std::optional<ClipRange> clip = std::nullopt);
MetricResult evaluate(Metric metric, const FactorState& state, const HdiMatrix& target,
                      std::optional<ClipRange> clip = std::nullopt);

/// Smallest and largest known value. Throws DomainError when empty.
ClipRange value_range(const HdiMatrix& matrix);

}  // namespace a2nlf
