#pragma once

#include "bcc/objective.hpp"
#include "bcc/types.hpp"

namespace bcc {

/// Per-column squared residuals D_l = sum_i (x_il - mu_il)^2, clamped below
/// at kResidualFloor so the weight update formula never divides by zero.
struct ColumnResiduals {
    std::vector<double> d;
};

constexpr double kResidualFloor = 1e-12;

/// Root of the simplex normalization equation sum_l S(alpha / D_l, lambda) = 2.
struct AlphaSolve {
    double alpha_star = 0.0;
    double residual = 0.0;  // sum_l S(alpha*/D_l, lambda) - 2 at the returned root
    int iterations = 0;
};

/// Extra knobs for fit() that are not model hyperparameters: worker threads,
/// warm starts, and the frozen-uniform-weight baseline mode.
struct FitControls {
    int threads = 1;                          // 0 = hardware concurrency
    const CentroidMatrix* mu_init = nullptr;  // defaults to X
    const WeightVector* w_init = nullptr;     // defaults to uniform 1/p
    bool freeze_weights = false;              // skip the weight update entirely
    const std::vector<int>* row_order = nullptr;  // Gauss-Seidel row order (default ascending)
};

/// One Gauss-Seidel sweep of the closed-form centroid update. Columns are
/// independent; within a column, rows update in ascending index order (or in
/// row_order when given), each cell using the latest values of other rows.
/// Cells with a zero denominator are left unchanged; their count is returned.
/// Held-out cells, when a mask is given, drop the data term and update from
/// the fusion terms alone.
long update_centroids_sweep(const Matrix& x, CentroidMatrix& mu, const WeightVector& w,
                            const AffinityGraph& phi, double gamma, double lambda,
                            const HoldoutMask* mask = nullptr,
                            const std::vector<int>* row_order = nullptr, int threads = 1);

/// Per-column residuals. Each column's addends are summed in value-sorted
/// order, so the result is independent of any row permutation of (x, mu).
ColumnResiduals column_residuals(const Matrix& x, const CentroidMatrix& mu,
                                 const HoldoutMask* mask = nullptr);

/// Bisection solve for alpha* over the bracket [0, (2 + p*lambda) * max_l D_l].
AlphaSolve solve_alpha(const ColumnResiduals& d, double lambda);

/// Exact piecewise-linear solve: sort the activation thresholds lambda * D_l,
/// then on each interval the active set is fixed and alpha solves a linear
/// equation. Cross-check for the bisection route.
AlphaSolve solve_alpha_sorted(const ColumnResiduals& d, double lambda);

/// Closed-form weight update w_l = (1/2) * S(alpha* / D_l, lambda).
WeightVector weights_from_residuals(const ColumnResiduals& d, double lambda);
WeightVector update_weights(const Matrix& x, const CentroidMatrix& mu, double lambda);

/// Full block coordinate descent fit: initialize mu = X and w = 1/p, then
/// alternate centroid sweeps, the weight update, and (per the configured
/// cadence) adaptive affinity updates in the learned feature space, until the
/// relative objective change falls below tol_objective or max_iter is hit.
/// With a mask, held-out cells start at their column's observed mean (never at
/// the held value) and are driven by the fusion term alone thereafter.
/// When affinity updates are enabled, the convergence test only compares
/// objective values computed under the same affinities.
FitResult fit(const DataMatrix& x, const Hyperparameters& config,
              const AffinityGraph* phi_init = nullptr, const FitControls& controls = {},
              const HoldoutMask* mask = nullptr);

/// Warm-started solution path over an ascending gamma grid: each fit starts
/// from the previous solution's centroids and weights.
std::vector<FitResult> solution_path(const DataMatrix& x, const Hyperparameters& config,
                                     const std::vector<double>& gamma_grid,
                                     const FitControls& controls = {});

}  // namespace bcc
