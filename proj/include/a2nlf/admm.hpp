#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "a2nlf/dense_matrix.hpp"
#include "a2nlf/sparse_data.hpp"

namespace a2nlf {

/// Augmentation coefficient lambda and multiplier step eta. Both must be
/// finite and strictly positive; the constructor throws ConfigError otherwise.
class HyperParams {
 public:
  HyperParams(double lambda, double eta);

  double lambda() const noexcept { return lambda_; }
  double eta() const noexcept { return eta_; }

 private:
  double lambda_;
  double eta_;
};

/// The six parameter matrices of the augmented Lagrangian.
///
/// P, Z are the unconstrained fitting factors, A, X their nonnegative copies
/// and H, W the multipliers of the couplings P = A and Z = X. Row-side
/// matrices (P, A, H) are num_rows x rank, column-side (Z, X, W) num_cols x rank.
struct FactorState {
  std::size_t rank = 0;
  DenseMatrix P, Z, A, X, H, W;

  std::size_t num_rows() const noexcept { return P.rows(); }
  std::size_t num_cols() const noexcept { return Z.rows(); }

  bool operator==(const FactorState&) const = default;
};

/// P, Z, A, X uniform in (0, 0.05]; H, W zero. Throws DomainError on a zero
/// dimension or rank.
FactorState init_state(std::size_t num_rows, std::size_t num_cols, std::size_t rank,
                       std::uint64_t seed);

/// Throws DomainError when the state's shape does not fit the matrix.
void check_shape(const FactorState& state, const HdiMatrix& matrix);

/// Fitting residuals y - <P_u, Z_i> for every known entry, indexed by entry id.
std::vector<double> fitting_residuals(const FactorState& state, const HdiMatrix& train);
void refresh_residuals(const FactorState& state, const HdiMatrix& train, std::span<double> residual);

// Column kernels. Each touches column k only and skips rows (columns) whose
// training adjacency is empty. The residual-taking overloads keep `residual`
// consistent with the new P / Z values; the others recompute it first.

/// p(u,k) <- argmin of the Lagrangian over p(u,k), all else fixed.
void update_p_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k, std::span<double> residual);
void update_p_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k);

/// z(i,k) <- argmin of the Lagrangian over z(i,k), all else fixed.
void update_z_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k, std::span<double> residual);
void update_z_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k);

/// a(u,k) <- max(0, p(u,k) + h(u,k) / (lambda |Lambda(u)|)).
void project_a_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                      std::size_t k);
/// x(i,k) <- max(0, z(i,k) + w(i,k) / (lambda |Lambda(i)|)).
void project_x_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                      std::size_t k);

/// h(u,k) <- h(u,k) + eta lambda |Lambda(u)| (p(u,k) - a(u,k)).
void update_h_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k);
/// w(i,k) <- w(i,k) + eta lambda |Lambda(i)| (z(i,k) - x(i,k)).
void update_w_column(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::size_t k);

/// One training iteration: for k = 0..rank-1, update P then Z, project A then
/// X, then step H and W, each step seeing the results of the previous ones.
/// `workspace` is resized as needed and holds the fitting residuals, which are
/// recomputed from scratch at the start of every call.
void train_iteration(FactorState& state, const HdiMatrix& train, const HyperParams& hp,
                     std::vector<double>& workspace);
void train_iteration(FactorState& state, const HdiMatrix& train, const HyperParams& hp);

/// <A_row, X_col>. Throws DomainError for out-of-range indices.
double predict(const FactorState& state, std::size_t row, std::size_t col);

inline double predict_unchecked(const FactorState& state, std::size_t row, std::size_t col) {
  const auto a = state.A.row(row);
  const auto x = state.X.row(col);
  double dot = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * x[k];
  return dot;
}

struct TerminationPolicy {
  double tol = 1e-5;
  std::size_t patience = 5;
  std::size_t max_iters = 1000;

  /// Throws ConfigError unless tol > 0, patience >= 1, max_iters >= 1.
  void validate() const;
};

enum class StopReason { Converged, Diverging, MaxIters };
std::string_view to_string(StopReason reason);

/// Decides whether training stops after the iterations whose training errors
/// are listed in `history` (oldest first). Checked in order: converged when
/// the last two errors differ by less than tol, diverging when each of the
/// last `patience` differences is strictly positive, max-iters when the
/// history holds max_iters errors. Returns nullopt to continue.
std::optional<StopReason> check_termination(std::span<const double> history,
                                            const TerminationPolicy& policy);

}  // namespace a2nlf
