#include "a2nlf/admm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "a2nlf/errors.hpp"
#include "a2nlf/rng.hpp"

namespace a2nlf {

HyperParams::HyperParams(double lambda, double eta) : lambda_(lambda), eta_(eta) {
  if (!(std::isfinite(lambda) && lambda > 0.0))
    throw ConfigError("lambda must be positive, got " + std::to_string(lambda));
  if (!(std::isfinite(eta) && eta > 0.0))
    throw ConfigError("eta must be positive, got " + std::to_string(eta));
}

FactorState init_state(std::size_t num_rows, std::size_t num_cols, std::size_t rank,
                       std::uint64_t seed) {
  if (num_rows == 0 || num_cols == 0 || rank == 0)
    throw DomainError("factor state needs nonzero rows, columns and rank");
  FactorState s;
  s.rank = rank;
  Rng rng(seed);
  const auto fill = [&](DenseMatrix& m, std::size_t rows) {
    m = DenseMatrix(rows, rank);
    for (double& v : m.data()) v = (1.0 - rng.uniform()) * 0.05;
  };
  fill(s.P, num_rows);
  fill(s.Z, num_cols);
  fill(s.A, num_rows);
  fill(s.X, num_cols);
  s.H = DenseMatrix(num_rows, rank);
  s.W = DenseMatrix(num_cols, rank);
  return s;
}

void check_shape(const FactorState& state, const HdiMatrix& matrix) {
  const std::size_t d = state.rank;
  const bool rows_ok = state.P.rows() == matrix.num_rows() && state.A.rows() == matrix.num_rows() &&
                       state.H.rows() == matrix.num_rows();
  const bool cols_ok = state.Z.rows() == matrix.num_cols() && state.X.rows() == matrix.num_cols() &&
                       state.W.rows() == matrix.num_cols();
  const bool rank_ok = d > 0 && state.P.cols() == d && state.Z.cols() == d && state.A.cols() == d &&
                       state.X.cols() == d && state.H.cols() == d && state.W.cols() == d;
  if (!(rows_ok && cols_ok && rank_ok))
    throw DomainError("factor state of shape " + std::to_string(state.num_rows()) + "x" +
                      std::to_string(state.num_cols()) + " (rank " + std::to_string(d) +
                      ") does not match a " + std::to_string(matrix.num_rows()) + "x" +
                      std::to_string(matrix.num_cols()) + " matrix");
}

void refresh_residuals(const FactorState& state, const HdiMatrix& train, std::span<double> residual) {
  const auto entries = train.entries();
  for (std::size_t id = 0; id < entries.size(); ++id) {
    const Entry& e = entries[id];
    const auto p = state.P.row(e.row);
    const auto z = state.Z.row(e.col);
    double dot = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) dot += p[k] * z[k];
    residual[id] = e.value - dot;
  }
}

std::vector<double> fitting_residuals(const FactorState& state, const HdiMatrix& train) {
  std::vector<double> residual(train.size());
  refresh_residuals(state, train, residual);
  return residual;
}

namespace {

[[noreturn]] void non_finite(char what, std::size_t index, std::size_t k) {
  throw NumericError(std::string("non-finite ") + what + " at (" + std::to_string(index) + ", " +
                     std::to_string(k) + ")");
}

}  // namespace

// With r = y - <p_u, z_i>, the j != k partial residual is r + p(u,k) z(i,k).
void update_p_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k, std::span<double> residual) {
  for (std::size_t u = 0; u < train.num_rows(); ++u) {
    const std::size_t n = train.row_count(u);
    if (n == 0) continue;
    const double old = state.P(u, k);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t id = train.row_begin(u); id < train.row_end(u); ++id) {
      const double z = state.Z(train.entry(id).col, k);
      num += z * (residual[id] + old * z);
      den += z * z;
    }
    const double weight = hp.lambda() * static_cast<double>(n);
    const double fresh = (num + weight * state.A(u, k) - state.H(u, k)) / (den + weight);
    if (!std::isfinite(fresh)) non_finite('p', u, k);
    const double delta = fresh - old;
    for (std::size_t id = train.row_begin(u); id < train.row_end(u); ++id)
      residual[id] -= delta * state.Z(train.entry(id).col, k);
    state.P(u, k) = fresh;
  }
}

void update_z_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k, std::span<double> residual) {
  for (std::size_t i = 0; i < train.num_cols(); ++i) {
    const auto ids = train.col(i);
    if (ids.empty()) continue;
    const double old = state.Z(i, k);
    double num = 0.0;
    double den = 0.0;
    for (const std::size_t id : ids) {
      const double p = state.P(train.entry(id).row, k);
      num += p * (residual[id] + old * p);
      den += p * p;
    }
    const double weight = hp.lambda() * static_cast<double>(ids.size());
    const double fresh = (num + weight * state.X(i, k) - state.W(i, k)) / (den + weight);
    if (!std::isfinite(fresh)) non_finite('z', i, k);
    const double delta = fresh - old;
    for (const std::size_t id : ids) residual[id] -= delta * state.P(train.entry(id).row, k);
    state.Z(i, k) = fresh;
  }
}

void update_p_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k) {
  std::vector<double> residual = fitting_residuals(state, train);
  update_p_column(state, train, hp, k, residual);
}

void update_z_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k) {
  std::vector<double> residual = fitting_residuals(state, train);
  update_z_column(state, train, hp, k, residual);
}

void project_a_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                      std::size_t k) {
  for (std::size_t u = 0; u < train.num_rows(); ++u) {
    const std::size_t n = train.row_count(u);
    if (n == 0) continue;
    state.A(u, k) =
        std::max(0.0, state.P(u, k) + state.H(u, k) / (hp.lambda() * static_cast<double>(n)));
  }
}

void project_x_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                      std::size_t k) {
  for (std::size_t i = 0; i < train.num_cols(); ++i) {
    const std::size_t n = train.col_count(i);
    if (n == 0) continue;
    state.X(i, k) =
        std::max(0.0, state.Z(i, k) + state.W(i, k) / (hp.lambda() * static_cast<double>(n)));
  }
}

void update_h_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k) {
  for (std::size_t u = 0; u < train.num_rows(); ++u) {
    const std::size_t n = train.row_count(u);
    if (n == 0) continue;
    double& h = state.H(u, k);
    h += hp.eta() * hp.lambda() * static_cast<double>(n) * (state.P(u, k) - state.A(u, k));
    if (!std::isfinite(h)) non_finite('h', u, k);
  }
}

void update_w_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k) {
  for (std::size_t i = 0; i < train.num_cols(); ++i) {
    const std::size_t n = train.col_count(i);
    if (n == 0) continue;
    double& w = state.W(i, k);
    w += hp.eta() * hp.lambda() * static_cast<double>(n) * (state.Z(i, k) - state.X(i, k));
    if (!std::isfinite(w)) non_finite('w', i, k);
  }
}

void train_iteration(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::vector<double>& workspace) {
  check_shape(state, train);
  workspace.resize(train.size());
  refresh_residuals(state, train, workspace);
  for (std::size_t k = 0; k < state.rank; ++k) {
    update_p_column(state, train, hp, k, workspace);
    update_z_column(state, train, hp, k, workspace);
    project_a_column(state, train, hp, k);
    project_x_column(state, train, hp, k);
    update_h_column(state, train, hp, k);
    update_w_column(state, train, hp, k);
  }
}

void train_iteration(FactorState& state, const HdiMatrix& train, const HyperParams& hp) {
  std::vector<double> workspace;
  train_iteration(state, train, hp, workspace);
}

double predict(const FactorState& state, std::size_t row, std::size_t col) {
  if (row >= state.num_rows() || col >= state.num_cols())
    throw DomainError("prediction index (" + std::to_string(row) + ", " + std::to_string(col) +
                      ") out of range");
  return predict_unchecked(state, row, col);
}

void TerminationPolicy::validate() const {
  if (!(std::isfinite(tol) && tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (patience < 1) throw ConfigError("patience must be at least 1");
  if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::Diverging: return "diverging";
    case StopReason::MaxIters: return "max-iters";
  }
  return "unknown";
}

std::optional<StopReason> check_termination(std::span<const double> history,
                                            const TerminationPolicy& policy) {
  const std::size_t t = history.size();
  if (t >= 2 && std::abs(history[t - 1] - history[t - 2]) < policy.tol) return StopReason::Converged;
  if (t > policy.patience) {
    bool rising = true;
    for (std::size_t n = t - policy.patience; n < t && rising; ++n) rising = history[n] > history[n - 1];
    if (rising) return StopReason::Diverging;
  }
  if (t >= policy.max_iters) return StopReason::MaxIters;
  return std::nullopt;
}

}  // namespace a2nlf
