#include "bcc/tune.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bcc/affinity.hpp"
#include "bcc/bench.hpp"

namespace bcc {

HoldoutMask make_holdout_mask(int n, int p, double fraction, std::uint64_t seed) {
    if (n < 1 || p < 1) throw std::invalid_argument("make_holdout_mask: need n, p >= 1");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("make_holdout_mask: fraction must be in (0, 1)");

    const long long total = static_cast<long long>(n) * p;
    const long long target = std::llround(fraction * static_cast<double>(total));
    // Observed cells must still cover every row and every column.
    if (target > total - std::max(n, p))
        throw std::invalid_argument("make_holdout_mask: fraction leaves a row or column empty");

    HoldoutMask mask(n, p);
    mask.fraction = fraction;
    std::vector<int> row_obs(n, p), col_obs(p, n);
    Rng rng(seed);
    long long stall = 0;
    const long long stall_limit = 1000 * std::max(total, 1000LL);
    while (static_cast<long long>(mask.count()) < target) {
        const std::uint64_t cell = rng.below(static_cast<std::uint64_t>(total));
        const int i = static_cast<int>(cell / p);
        const int l = static_cast<int>(cell % p);
        if (mask.is_held(i, l) || row_obs[i] == 1 || col_obs[l] == 1) {
            if (++stall > stall_limit)
                throw std::runtime_error("make_holdout_mask: sampling stalled; lower the fraction");
            continue;
        }
        stall = 0;
        mask.mark(i, l);
        --row_obs[i];
        --col_obs[l];
    }
    return mask;
}

FitResult fit_masked(const DataMatrix& x, const HoldoutMask& mask, const Hyperparameters& config,
                     const AffinityGraph* phi_init, const FitControls& controls) {
    if (mask.n != x.n() || mask.p != x.p())
        throw std::invalid_argument("fit_masked: mask shape mismatch");
    // Re-check the coverage invariant; masks may arrive from outside make_holdout_mask.
    std::vector<int> row_obs(mask.n, 0), col_obs(mask.p, 0);
    for (int i = 0; i < mask.n; ++i)
        for (int l = 0; l < mask.p; ++l)
            if (!mask.is_held(i, l)) {
                ++row_obs[i];
                ++col_obs[l];
            }
    for (int i = 0; i < mask.n; ++i)
        if (row_obs[i] == 0)
            throw std::invalid_argument("fit_masked: row " + std::to_string(i) + " fully held out");
    for (int l = 0; l < mask.p; ++l)
        if (col_obs[l] == 0)
            throw std::invalid_argument("fit_masked: column " + std::to_string(l) + " fully held out");
    return fit(x, config, phi_init, controls, &mask);
}

double validation_error(const Matrix& x, const CentroidMatrix& mu, const HoldoutMask& mask) {
    if (!x.same_shape(mu)) throw std::invalid_argument("validation_error: shape mismatch");
    if (mask.n != x.rows || mask.p != x.cols)
        throw std::invalid_argument("validation_error: mask shape mismatch");
    double acc = 0.0;
    for (const auto& [i, l] : mask.cells) {
        const double diff = x(i, l) - mu(i, l);
        acc += diff * diff;
    }
    return acc;
}

GridSearchResult grid_search(const DataMatrix& x, const std::vector<double>& lambda_grid,
                             const std::vector<double>& gamma_grid, const MaskParams& mask_params,
                             const Hyperparameters& config, const FitControls& controls) {
    if (lambda_grid.empty() || gamma_grid.empty())
        throw std::invalid_argument("grid_search: empty grid");
    for (double l : lambda_grid)
        if (!(l >= 0.0)) throw std::invalid_argument("grid_search: negative lambda");
    for (double g : gamma_grid)
        if (!(g >= 0.0)) throw std::invalid_argument("grid_search: negative gamma");

    GridSearchResult result;
    result.mask = make_holdout_mask(x.n(), x.p(), mask_params.fraction, mask_params.seed);

    // Initial affinities depend only on (X, k, tau); share them across cells.
    const AffinityGraph phi0 = compute_affinities(x.values, config.k_neighbors,
                                                  DistanceMetric::euclidean(), config.tau);

    bool first = true;
    for (double lambda : lambda_grid) {
        for (double gamma : gamma_grid) {
            Hyperparameters cfg = config;
            cfg.lambda = lambda;
            cfg.gamma = gamma;
            const FitResult fitres = fit_masked(x, result.mask, cfg, &phi0, controls);
            GridSearchResult::Entry entry;
            entry.lambda = lambda;
            entry.gamma = gamma;
            entry.validation_error = validation_error(x.values, fitres.mu, result.mask);
            entry.iterations = fitres.iterations;
            entry.converged = fitres.converged;
            result.table.push_back(entry);

            const bool better =
                first || entry.validation_error < result.best_error ||
                (entry.validation_error == result.best_error &&
                 (gamma < result.best_gamma ||
                  (gamma == result.best_gamma && lambda < result.best_lambda)));
            if (better) {
                first = false;
                result.best_lambda = lambda;
                result.best_gamma = gamma;
                result.best_error = entry.validation_error;
            }
        }
    }
    return result;
}

}  // namespace bcc
