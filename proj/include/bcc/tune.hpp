#pragma once

#include <cstdint>

#include "bcc/solver.hpp"
#include "bcc/types.hpp"

namespace bcc {

/// Draw a holdout set of round(fraction*n*p) cells, uniformly without
/// replacement, rejecting any draw that would empty a row or column.
HoldoutMask make_holdout_mask(int n, int p, double fraction, std::uint64_t seed);

/// fit() with held-out cells excluded from the data term, the residuals, and
/// the objective; their centroid entries start at the observed column mean and
/// evolve through fusion alone. An empty mask reproduces fit() bitwise.
FitResult fit_masked(const DataMatrix& x, const HoldoutMask& mask, const Hyperparameters& config,
                     const AffinityGraph* phi_init = nullptr, const FitControls& controls = {});

/// Reconstruction error on the held-out cells: sum of squared residuals.
double validation_error(const Matrix& x, const CentroidMatrix& mu, const HoldoutMask& mask);

struct MaskParams {
    double fraction = 0.1;
    std::uint64_t seed = 1;
};

struct GridSearchResult {
    struct Entry {
        double lambda = 0.0;
        double gamma = 0.0;
        double validation_error = 0.0;
        int iterations = 0;
        bool converged = false;
    };
    double best_lambda = 0.0;
    double best_gamma = 0.0;
    double best_error = 0.0;
    std::vector<Entry> table;  // lambda-major, gamma-minor grid order
    HoldoutMask mask;
};

/// Score every (lambda, gamma) pair on one shared holdout mask and return the
/// argmin; ties prefer smaller gamma, then smaller lambda.
GridSearchResult grid_search(const DataMatrix& x, const std::vector<double>& lambda_grid,
                             const std::vector<double>& gamma_grid, const MaskParams& mask_params,
                             const Hyperparameters& config, const FitControls& controls = {});

}  // namespace bcc
