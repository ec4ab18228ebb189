#include "bcc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bcc/affinity.hpp"
#include "parallel.hpp"

namespace bcc {

namespace {

using detail::effective_threads;
using detail::parallel_chunks;

double alpha_equation(const std::vector<double>& d, double lambda, double alpha) {
    double acc = 0.0;
    for (double dl : d) acc += soft_threshold(alpha / dl, lambda);
    return acc;
}

bool affinity_update_due(const Hyperparameters& cfg, int iteration) {
    switch (cfg.affinity_update) {
        case AffinityUpdate::never: return false;
        case AffinityUpdate::every_iteration: return true;
        case AffinityUpdate::every_m_iterations: return iteration % cfg.affinity_every_m == 0;
    }
    return false;
}

}  // namespace

long update_centroids_sweep(const Matrix& x, CentroidMatrix& mu, const WeightVector& w,
                            const AffinityGraph& phi, double gamma, double lambda,
                            const HoldoutMask* mask, const std::vector<int>* row_order,
                            int threads) {
    if (!x.same_shape(mu)) throw std::invalid_argument("update_centroids_sweep: shape mismatch");
    if (w.size() != x.cols) throw std::invalid_argument("update_centroids_sweep: weight length mismatch");
    if (phi.size() != x.rows) throw std::invalid_argument("update_centroids_sweep: affinity node count mismatch");
    if (gamma < 0.0 || lambda < 0.0) throw std::invalid_argument("update_centroids_sweep: negative gamma or lambda");
    if (row_order != nullptr && static_cast<int>(row_order->size()) != x.rows)
        throw std::invalid_argument("update_centroids_sweep: row order size mismatch");

    const int n = x.rows;
    const int p = x.cols;
    const std::vector<double> coef = norm_coefficients(w, lambda);
    const std::vector<double> incident = phi.incident_sums();

    std::vector<int> default_order;
    if (row_order == nullptr) {
        default_order.resize(n);
        std::iota(default_order.begin(), default_order.end(), 0);
        row_order = &default_order;
    }

    const int nthreads = effective_threads(threads);
    std::vector<long> degenerate(std::max(1, nthreads), 0);
    auto sweep_columns = [&](int slot, int l_begin, int l_end) {
        long degen = 0;
        for (int l = l_begin; l < l_end; ++l) {
            const double q_col = coef[l];
            for (int i : *row_order) {
                const double q = (mask != nullptr && mask->is_held(i, l)) ? 0.0 : q_col;
                const double denom = gamma * incident[i] + q;
                if (denom == 0.0) {
                    ++degen;  // objective is indifferent here; hold the value
                    continue;
                }
                double acc = 0.0;
                for (const AffinityGraph::Edge& e : phi.out(i)) acc += e.phi * mu(e.other, l);
                for (const AffinityGraph::Edge& e : phi.in(i)) acc += e.phi * mu(e.other, l);
                mu(i, l) = (gamma * acc + q * x(i, l)) / denom;
            }
        }
        degenerate[slot] = degen;
    };
    parallel_chunks(p, nthreads, sweep_columns);
    return std::accumulate(degenerate.begin(), degenerate.end(), 0L);
}

ColumnResiduals column_residuals(const Matrix& x, const CentroidMatrix& mu, const HoldoutMask* mask) {
    if (!x.same_shape(mu)) throw std::invalid_argument("column_residuals: shape mismatch");
    const int n = x.rows;
    const int p = x.cols;
    ColumnResiduals res;
    res.d.assign(p, 0.0);
    // Summing each column's addends in sorted order makes D_l independent of
    // row order, which the solver's permutation equivariance relies on.
    std::vector<double> addends;
    addends.reserve(n);
    for (int l = 0; l < p; ++l) {
        addends.clear();
        for (int i = 0; i < n; ++i) {
            if (mask != nullptr && mask->is_held(i, l)) continue;
            const double diff = x(i, l) - mu(i, l);
            addends.push_back(diff * diff);
        }
        if (addends.empty())
            throw std::runtime_error("column_residuals: column " + std::to_string(l) +
                                     " fully held out");
        std::sort(addends.begin(), addends.end());
        double acc = 0.0;
        for (double a : addends) acc += a;
        res.d[l] = std::max(acc, kResidualFloor);
    }
    return res;
}

AlphaSolve solve_alpha(const ColumnResiduals& d, double lambda) {
    const int p = static_cast<int>(d.d.size());
    if (p == 0) throw std::invalid_argument("solve_alpha: empty residuals");
    for (double dl : d.d)
        if (!(dl > 0.0)) throw std::invalid_argument("solve_alpha: nonpositive residual");
    if (lambda < 0.0) throw std::invalid_argument("solve_alpha: negative lambda");

    const double max_d = *std::max_element(d.d.begin(), d.d.end());
    double lo = 0.0;
    double hi = (2.0 + p * lambda) * max_d;
    // At hi the term for the largest residual alone reaches 2 + (p-1)*lambda >= 2.
    const double scale = 2.0 + p * lambda;
    const double target = std::min(1e-10 * scale, 1e-9);

    AlphaSolve best;
    best.alpha_star = hi;
    best.residual = alpha_equation(d.d, lambda, hi) - 2.0;
    int iter = 0;
    bool residual_ok = false;
    while (iter < 500) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket exhausted at this precision
        ++iter;
        const double res = alpha_equation(d.d, lambda, mid) - 2.0;
        if (std::fabs(res) < std::fabs(best.residual)) {
            best.alpha_star = mid;
            best.residual = res;
        }
        if (std::fabs(res) <= target) residual_ok = true;
        // Keep narrowing past the residual test: where the equation is flat, a
        // small residual alone does not pin alpha tightly.
        if (residual_ok && hi - lo <= 1e-10 * mid) break;
        if (res < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    best.iterations = iter;
    return best;
}

AlphaSolve solve_alpha_sorted(const ColumnResiduals& d, double lambda) {
    const int p = static_cast<int>(d.d.size());
    if (p == 0) throw std::invalid_argument("solve_alpha_sorted: empty residuals");
    for (double dl : d.d)
        if (!(dl > 0.0)) throw std::invalid_argument("solve_alpha_sorted: nonpositive residual");
    if (lambda < 0.0) throw std::invalid_argument("solve_alpha_sorted: negative lambda");

    // Feature l is active exactly when alpha exceeds its threshold lambda*D_l.
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ta = lambda * d.d[a];
        const double tb = lambda * d.d[b];
        return ta != tb ? ta < tb : a < b;
    });

    AlphaSolve out;
    double inv_sum = 0.0;
    double best_res = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= p; ++m) {
        inv_sum += 1.0 / d.d[order[m - 1]];
        const double alpha = (2.0 + lambda * m) / inv_sum;
        const double t_low = lambda * d.d[order[m - 1]];
        const double t_high = m < p ? lambda * d.d[order[m]] : std::numeric_limits<double>::infinity();
        if (alpha >= t_low && alpha <= t_high) {
            out.alpha_star = alpha;
            out.residual = alpha_equation(d.d, lambda, alpha) - 2.0;
            out.iterations = m;
            return out;
        }
        // Rounding can push alpha just outside its interval; keep the best fallback.
        const double res = alpha_equation(d.d, lambda, alpha) - 2.0;
        if (std::fabs(res) < std::fabs(best_res)) {
            best_res = res;
            out.alpha_star = alpha;
            out.residual = res;
            out.iterations = m;
        }
    }
    return out;
}

WeightVector weights_from_residuals(const ColumnResiduals& d, double lambda) {
    const AlphaSolve alpha = solve_alpha(d, lambda);
    std::vector<double> w(d.d.size());
    for (std::size_t l = 0; l < d.d.size(); ++l)
        w[l] = 0.5 * soft_threshold(alpha.alpha_star / d.d[l], lambda);
    return WeightVector::from(std::move(w));
}

WeightVector update_weights(const Matrix& x, const CentroidMatrix& mu, double lambda) {
    return weights_from_residuals(column_residuals(x, mu), lambda);
}

FitResult fit(const DataMatrix& x, const Hyperparameters& config, const AffinityGraph* phi_init,
              const FitControls& controls, const HoldoutMask* mask) {
    config.validate();
    const Matrix& xm = x.values;
    const int n = x.n();
    const int p = x.p();
    if (mask != nullptr && (mask->n != n || mask->p != p))
        throw std::invalid_argument("fit: mask shape mismatch");
    if (config.k_neighbors > n - 1)
        throw std::invalid_argument("fit: k_neighbors must be <= n-1");

    FitResult result;
    if (controls.mu_init != nullptr) {
        if (!controls.mu_init->same_shape(xm)) throw std::invalid_argument("fit: mu_init shape mismatch");
        result.mu = *controls.mu_init;
    } else {
        result.mu = xm;
        if (mask != nullptr && mask->count() > 0) {
            // A held-out value must not leak in through the start point (at
            // gamma = 0 it would persist verbatim), so held cells start at
            // their column's observed mean instead.
            for (int l = 0; l < p; ++l) {
                double sum = 0.0;
                long seen = 0;
                for (int i = 0; i < n; ++i) {
                    if (mask->is_held(i, l)) continue;
                    sum += xm(i, l);
                    ++seen;
                }
                if (seen == 0)
                    throw std::invalid_argument("fit: column " + std::to_string(l) +
                                                " fully held out");
                const double mean = sum / static_cast<double>(seen);
                for (int i = 0; i < n; ++i)
                    if (mask->is_held(i, l)) result.mu(i, l) = mean;
            }
        }
    }
    if (controls.w_init != nullptr) {
        if (controls.w_init->size() != p) throw std::invalid_argument("fit: w_init length mismatch");
        result.w = *controls.w_init;
    } else {
        result.w = WeightVector::uniform(p);
    }
    if (phi_init != nullptr) {
        if (phi_init->size() != n) throw std::invalid_argument("fit: phi_init node count mismatch");
        result.phi = *phi_init;
    } else {
        result.phi = compute_affinities(xm, config.k_neighbors, DistanceMetric::euclidean(), config.tau);
    }

    if (controls.row_order != nullptr && static_cast<int>(controls.row_order->size()) != n)
        throw std::invalid_argument("fit: row_order size mismatch");

    const int threads = effective_threads(controls.threads);
    const double g0 =
        objective_value(xm, result.mu, result.w, result.phi, config.gamma, config.lambda, mask);
    if (!std::isfinite(g0)) throw std::runtime_error("fit: objective non-finite at initialization");
    result.objective_trace.push_back(g0);

    // Objective values are only comparable while phi is unchanged; span_start
    // is the first trace index computed under the current phi.
    int span_start = 0;
    bool phi_from_weights = false;  // current phi was built by an adaptive update
    WeightVector phi_weights;       // ... and this is the w it was built from

    result.iterations = config.max_iter;
    for (int t = 1; t <= config.max_iter; ++t) {
        for (int s = 0; s < config.inner_sweeps; ++s)
            result.degenerate_cells += update_centroids_sweep(xm, result.mu, result.w, result.phi,
                                                              config.gamma, config.lambda, mask,
                                                              controls.row_order, threads);
        if (!controls.freeze_weights)
            result.w = weights_from_residuals(column_residuals(xm, result.mu, mask), config.lambda);

        // The graph refresh belongs to the iteration: the trace entry below and
        // the stopping test must see the phi the next iteration will run under,
        // otherwise a fit started from a vanishing initial graph would stop
        // immediately instead of picking up the first rebuilt graph.
        if (affinity_update_due(config, t)) {
            // phi depends only on (X, w); identical weights cannot change it.
            if (!(phi_from_weights && phi_weights == result.w)) {
                AffinityGraph updated = compute_affinities(
                    xm, config.k_neighbors, DistanceMetric::weighted(result.w, config.lambda),
                    static_cast<double>(p));
                if (!updated.approx_equal(result.phi, 1e-15)) {
                    result.phi = std::move(updated);
                    ++result.affinity_updates;
                    span_start = t;
                }
                phi_from_weights = true;
                phi_weights = result.w;
            }
        }

        const double g = objective_value(xm, result.mu, result.w, result.phi, config.gamma,
                                         config.lambda, mask);
        if (!std::isfinite(g))
            throw std::runtime_error("fit: objective non-finite at iteration " + std::to_string(t));
        const double g_prev = result.objective_trace.back();
        result.objective_trace.push_back(g);
        if (t - 1 >= span_start &&
            std::fabs(g_prev - g) <= config.tol_objective * (1.0 + std::fabs(g_prev))) {
            result.converged = true;
            result.iterations = t;
            break;
        }
    }
    return result;
}

std::vector<FitResult> solution_path(const DataMatrix& x, const Hyperparameters& config,
                                     const std::vector<double>& gamma_grid,
                                     const FitControls& controls) {
    if (gamma_grid.empty()) throw std::invalid_argument("solution_path: empty gamma grid");
    for (std::size_t g = 0; g < gamma_grid.size(); ++g) {
        if (gamma_grid[g] < 0.0) throw std::invalid_argument("solution_path: negative gamma");
        if (g > 0 && gamma_grid[g] <= gamma_grid[g - 1])
            throw std::invalid_argument("solution_path: gamma grid must be strictly ascending");
    }

    // All fits share the same initial affinities.
    const AffinityGraph phi0 = compute_affinities(x.values, config.k_neighbors,
                                                  DistanceMetric::euclidean(), config.tau);

    std::vector<FitResult> path;
    path.reserve(gamma_grid.size());
    for (double gamma : gamma_grid) {
        Hyperparameters cfg = config;
        cfg.gamma = gamma;
        FitControls step = controls;
        if (!path.empty()) {
            step.mu_init = &path.back().mu;
            step.w_init = &path.back().w;
        }
        path.push_back(fit(x, cfg, &phi0, step));
    }
    return path;
}

}  // namespace bcc
