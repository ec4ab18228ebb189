// End-to-end acceptance battery. Each criterion prints exactly one line and
// the process exits nonzero if any gating criterion fails. Instance sets,
// seeds, and tolerances are frozen; every run of this binary reproduces the
// same numbers bit for bit on a given platform.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "bcc/affinity.hpp"
#include "bcc/assign.hpp"
#include "bcc/bench.hpp"
#include "bcc/io.hpp"
#include "bcc/solver.hpp"
#include "bcc/tune.hpp"
#include "oracles.hpp"

using namespace bcc;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool report(int id, const std::string& text, bool pass) {
    std::printf("criterion %2d: %s: %s\n", id, text.c_str(), pass ? "pass" : "FAIL");
    std::fflush(stdout);
    return pass;
}

// Gap cut over an average-linkage dendrogram, the downstream path every
// clustering criterion uses.
LabelVector gap_cut_labels(const Matrix& dist) {
    const Dendrogram dendro = average_linkage(dist);
    const CutStrategy cut = CutStrategy::largest_gap(default_min_size(dist.rows));
    return cut_dendrogram(dendro, cut, &dist);
}

// --- 1. Iterated centroid sweeps against dense per-column linear solves. ---

bool criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(11);
    int failures = 0;
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const int p = 1 + static_cast<int>(rng.below(3));
        Matrix x(n, p);
        for (double& v : x.data) v = rng.normal();

        std::vector<double> raw(p);
        double sum = 0.0;
        for (double& v : raw) {
            v = 0.1 + 0.9 * rng.uniform01();
            sum += v;
        }
        for (double& v : raw) v /= sum;
        const WeightVector w = WeightVector::from(raw);

        const double lambda = inst % 3 == 0 ? 0.0 : 0.4 * rng.uniform01();
        const double gamma = 0.1 + 1.9 * rng.uniform01();
        AffinityGraph phi(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && rng.uniform01() < 0.4) phi.add_edge(i, j, 0.1 + 0.9 * rng.uniform01());

        CentroidMatrix mu = x;
        for (int sweep = 0; sweep < 100000; ++sweep) {
            const CentroidMatrix before = mu;
            update_centroids_sweep(x, mu, w, phi, gamma, lambda);
            double delta = 0.0;
            for (std::size_t c = 0; c < mu.data.size(); ++c)
                delta = std::max(delta, std::fabs(mu.data[c] - before.data[c]));
            if (delta < 1e-13) break;
        }

        const Matrix exact = oracle::centroid_stationary_point(x, w, phi, gamma, lambda);
        double err = 0.0;
        for (std::size_t c = 0; c < mu.data.size(); ++c)
            err = std::max(err, std::fabs(mu.data[c] - exact.data[c]));
        worst = std::max(worst, err);
        if (err > 1e-8) ++failures;
    }
    const double elapsed = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "centroid sweeps match dense solves on 50 instances (worst %.2e, %.2fs)", worst,
                  elapsed);
    return report(1, buf, failures == 0 && elapsed < 1.0);
}

// --- 2. Closed-form weight update against exhaustive simplex search. ---

bool criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(22);
    int failures = 0;
    double worst_coord = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        const int p = 1 + static_cast<int>(rng.below(8));
        ColumnResiduals d;
        d.d.resize(p);
        for (double& v : d.d) v = std::pow(10.0, -3.0 + 4.0 * rng.uniform01());
        const double lambda = inst % 4 == 0 ? 0.0 : 0.6 * rng.uniform01();

        const WeightVector w = weights_from_residuals(d, lambda);
        const std::vector<double> ref = oracle::weight_minimizer_search(d.d, lambda);

        bool ok = true;
        double sum = 0.0;
        for (int l = 0; l < p; ++l) {
            worst_coord = std::max(worst_coord, std::fabs(w[l] - ref[l]));
            if (std::fabs(w[l] - ref[l]) > 2e-3) ok = false;
            if (!(w[l] >= 0.0)) ok = false;
            sum += w[l];
        }
        if (std::fabs(sum - 1.0) > 1e-8) ok = false;

        // Stationarity: the active marginal costs (2w+lambda)*d agree, and no
        // zeroed coordinate offers a cheaper direction.
        double active_min = std::numeric_limits<double>::infinity();
        double active_max = 0.0;
        for (int l = 0; l < p; ++l) {
            if (w[l] > 0.0) {
                const double m = (2.0 * w[l] + lambda) * d.d[l];
                active_min = std::min(active_min, m);
                active_max = std::max(active_max, m);
            }
        }
        if (active_min < active_max * (1.0 - 1e-8)) ok = false;
        for (int l = 0; l < p; ++l)
            if (w[l] == 0.0 && lambda * d.d[l] < active_max * (1.0 - 1e-8)) ok = false;

        if (!ok) ++failures;
    }
    const double elapsed = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "weight update matches simplex search on 100 instances (worst %.2e, %.2fs)",
                  worst_coord, elapsed);
    return report(2, buf, failures == 0 && elapsed < 10.0);
}

// --- 3. Monotone descent and convergence with the neighbor graph frozen. ---

bool criterion_3() {
    struct Instance {
        int design;  // 0 two-cluster, 1 corners, 2 sparse-centers
        std::uint64_t seed;
        double tau, gamma, lambda;
        int sweeps;
    };
    // Kernel scales sit at the typical squared distance of each design so the
    // frozen graph carries real fusion terms; sweep counts rise with gamma to
    // keep the slowest collapses inside the iteration budget.
    const std::vector<Instance> table = {
        {0, 1, 30.0, 0.5, 0.0, 2},  {0, 2, 30.0, 1.0, 0.1, 1},  {0, 3, 30.0, 5.0, 0.3, 2},
        {0, 4, 30.0, 20.0, 0.0, 1}, {0, 5, 30.0, 0.5, 0.1, 2},  {0, 6, 30.0, 1.0, 0.3, 1},
        {0, 7, 30.0, 5.0, 0.0, 2},  {1, 1, 25.0, 0.5, 0.1, 2},  {1, 2, 25.0, 1.0, 0.3, 3},
        {1, 3, 25.0, 5.0, 0.0, 20}, {1, 4, 25.0, 20.0, 0.1, 30}, {1, 5, 25.0, 0.5, 0.3, 2},
        {1, 6, 25.0, 1.0, 0.0, 4},  {1, 7, 25.0, 5.0, 0.1, 12}, {2, 1, 70.0, 0.5, 0.3, 2},
        {2, 2, 70.0, 1.0, 0.0, 2},  {2, 3, 70.0, 5.0, 0.1, 6},  {2, 4, 70.0, 20.0, 0.3, 1},
        {2, 5, 70.0, 1.0, 0.0, 2},  {2, 6, 70.0, 5.0, 0.1, 1}};

    int converged = 0, monotone = 0;
    for (const Instance& inst : table) {
        const LabeledDataset data = inst.design == 0   ? gen_motivating(inst.seed)
                                    : inst.design == 1 ? gen_corners(15, 10, 0.25, inst.seed)
                                                       : gen_sparse_centers(80, 40, 4, 5, 0.015,
                                                                            inst.seed);
        Hyperparameters cfg;
        cfg.gamma = inst.gamma;
        cfg.lambda = inst.lambda;
        cfg.k_neighbors = 5;
        cfg.tau = inst.tau;
        cfg.max_iter = 500;
        cfg.inner_sweeps = inst.sweeps;
        const FitResult res = fit(data.x, cfg);
        if (res.converged && res.iterations < 500) ++converged;
        bool ok = true;
        for (std::size_t t = 1; t < res.objective_trace.size(); ++t)
            if (res.objective_trace[t] > res.objective_trace[t - 1] + 1e-9) ok = false;
        if (ok) ++monotone;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "frozen-graph descent: %d/20 monotone within 1e-9, %d/20 converged before 500",
                  monotone, converged);
    return report(3, buf, monotone == 20 && converged == 20);
}

// --- 4. Support recovery at n=1000, p=100: informative kept, noise zeroed. ---

bool criterion_4() {
    int all_informative_positive = 0;
    std::vector<int> zero_counts;
    for (std::uint64_t seed = 101; seed <= 130; ++seed) {
        const LabeledDataset data = gen_sparse_centers(1000, 100, 5, 5, 0.015, seed);
        const DataMatrix xs = standardize(data.x);
        Hyperparameters cfg;
        cfg.gamma = 100.0;
        cfg.lambda = 0.2;
        cfg.k_neighbors = 5;
        cfg.affinity_update = AffinityUpdate::every_iteration;
        cfg.inner_sweeps = 1;
        cfg.max_iter = 25;
        const FitResult res = fit(xs, cfg);

        bool positive = true;
        for (int l = 0; l < 5; ++l)
            if (!(res.w[l] > 0.0)) positive = false;
        if (positive) ++all_informative_positive;

        int zeros = 0;
        for (int l = 5; l < 100; ++l)
            if (res.w[l] == 0.0) ++zeros;
        zero_counts.push_back(zeros);
    }
    std::sort(zero_counts.begin(), zero_counts.end());
    const double median = 0.5 * (zero_counts[14] + zero_counts[15]);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "support recovery: informative all positive %d/30, median noise zeros %.0f/95",
                  all_informative_positive, median);
    return report(4, buf, all_informative_positive >= 28 && median >= 90.0);
}

// --- 5. Two-cluster benchmark with (lambda, gamma) picked by holdout tuning. ---

bool criterion_5() {
    const std::vector<double> lambda_grid = {0.0, 0.1, 0.3};
    const std::vector<double> gamma_grid = {1.0, 5.0, 20.0, 80.0};
    int recovered = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const LabeledDataset data = gen_motivating(seed);
        Hyperparameters cfg;
        cfg.k_neighbors = 5;
        cfg.affinity_update = AffinityUpdate::every_iteration;
        cfg.inner_sweeps = 1;
        cfg.max_iter = 60;
        MaskParams mask;
        mask.fraction = 0.1;
        mask.seed = 1;
        const GridSearchResult tuned = grid_search(data.x, lambda_grid, gamma_grid, mask, cfg);

        cfg.lambda = tuned.best_lambda;
        cfg.gamma = tuned.best_gamma;
        const FitResult res = fit(data.x, cfg);
        const Matrix dist = centroid_distance_matrix(res.mu, res.w, cfg.lambda);
        const double ari = adjusted_rand_index(data.truth, gap_cut_labels(dist));
        if (ari >= 0.95) ++recovered;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "holdout-tuned two-cluster recovery: ARI >= 0.95 on %d/20 seeds",
                  recovered);
    return report(5, buf, recovered >= 18);
}

// --- 6. Corner clusters under 30 noise dimensions: adaptive weights against
// the frozen-uniform-weight baseline. ---

bool criterion_6() {
    double full_sum = 0.0, base_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const LabeledDataset data = gen_corners(25, 30, 0.25, seed);
        Hyperparameters cfg;
        cfg.gamma = 10.0;
        cfg.k_neighbors = 7;
        cfg.affinity_update = AffinityUpdate::every_iteration;
        cfg.inner_sweeps = 1;
        cfg.max_iter = 60;

        cfg.lambda = 0.3;
        const FitResult full = fit(data.x, cfg);
        const Matrix dist_full = euclidean_distance_matrix(full.mu);
        full_sum += adjusted_rand_index(data.truth, gap_cut_labels(dist_full));

        cfg.lambda = 0.0;
        FitControls frozen;
        frozen.freeze_weights = true;
        const FitResult base = fit(data.x, cfg, nullptr, frozen);
        const Matrix dist_base = euclidean_distance_matrix(base.mu);
        base_sum += adjusted_rand_index(data.truth, gap_cut_labels(dist_base));
    }
    const double full_mean = full_sum / 20.0;
    const double base_mean = base_sum / 20.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "noise-dimension study: mean ARI %.3f adaptive vs %.3f frozen-uniform",
                  full_mean, base_mean);
    return report(6, buf, full_mean - base_mean >= 0.1);
}

// --- 7. Metric-refreshed neighbor graphs on sparse centers, with and without
// refreshes. ---

bool criterion_7() {
    int contrast = 0, on_perfect = 0, off_below = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const LabeledDataset data = gen_sparse_centers(50, 200, 4, 5, 0.015, seed);
        Hyperparameters cfg;
        cfg.gamma = 0.3;
        cfg.lambda = 0.1;
        cfg.k_neighbors = 5;
        cfg.inner_sweeps = 1000;
        cfg.max_iter = 10;

        cfg.affinity_update = AffinityUpdate::every_iteration;
        const FitResult on = fit(data.x, cfg);
        const Matrix dist_on = euclidean_distance_matrix(on.mu);
        const double ari_on = adjusted_rand_index(data.truth, gap_cut_labels(dist_on));

        cfg.affinity_update = AffinityUpdate::never;
        const FitResult off = fit(data.x, cfg);
        const Matrix dist_off = euclidean_distance_matrix(off.mu);
        const double ari_off = adjusted_rand_index(data.truth, gap_cut_labels(dist_off));

        const bool perfect = ari_on >= 1.0 - 1e-12;
        const bool below = ari_off < 1.0 - 1e-12;
        if (perfect) ++on_perfect;
        if (below) ++off_below;
        if (perfect && below) ++contrast;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "graph refresh contrast: refreshed ARI=1 on %d/20, frozen ARI<1 on %d/20, both on "
                  "%d/20",
                  on_perfect, off_below, contrast);
    return report(7, buf, contrast >= 15);
}

// --- 8. Holdout plumbing: mask size, bitwise empty-mask equality, and
// deterministic grid search. ---

bool criterion_8() {
    const HoldoutMask mask = make_holdout_mask(100, 50, 0.1, 7);
    const bool size_ok = mask.count() == 500;

    const LabeledDataset data = gen_motivating(3);
    Hyperparameters cfg;
    cfg.gamma = 1.5;
    cfg.lambda = 0.1;
    cfg.k_neighbors = 5;
    cfg.affinity_update = AffinityUpdate::every_iteration;
    cfg.inner_sweeps = 2;
    cfg.max_iter = 40;
    const FitResult plain = fit(data.x, cfg);
    const HoldoutMask empty(data.x.n(), data.x.p());
    const FitResult masked = fit_masked(data.x, empty, cfg);
    const bool bitwise = plain.mu.data == masked.mu.data && plain.w == masked.w &&
                         plain.objective_trace == masked.objective_trace &&
                         plain.iterations == masked.iterations;

    const LabeledDataset tune_data = gen_motivating(4);
    Hyperparameters tune_cfg;
    tune_cfg.k_neighbors = 5;
    tune_cfg.affinity_update = AffinityUpdate::every_iteration;
    tune_cfg.inner_sweeps = 1;
    tune_cfg.max_iter = 30;
    MaskParams mp;
    mp.fraction = 0.1;
    mp.seed = 9;
    const GridSearchResult a = grid_search(tune_data.x, {0.1, 0.3}, {1.0, 5.0}, mp, tune_cfg);
    const GridSearchResult b = grid_search(tune_data.x, {0.1, 0.3}, {1.0, 5.0}, mp, tune_cfg);
    bool deterministic = a.best_lambda == b.best_lambda && a.best_gamma == b.best_gamma &&
                         a.table.size() == b.table.size();
    if (deterministic)
        for (std::size_t i = 0; i < a.table.size(); ++i)
            if (a.table[i].validation_error != b.table[i].validation_error) deterministic = false;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "holdout plumbing: mask 500 cells %s, empty mask bitwise %s, grid search "
                  "deterministic %s",
                  size_ok ? "yes" : "no", bitwise ? "yes" : "no", deterministic ? "yes" : "no");
    return report(8, buf, size_ok && bitwise && deterministic);
}

// --- 9. Adjusted Rand index against pair counting. ---

bool criterion_9() {
    Rng rng(33);
    int failures = 0;
    double worst = 0.0;
    for (int inst = 0; inst < 200; ++inst) {
        const int n = 2 + static_cast<int>(rng.below(11));
        LabelVector a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = static_cast<int>(rng.below(4));
            b[i] = static_cast<int>(rng.below(4));
        }
        const double lib = adjusted_rand_index(a, b);
        const double ref = oracle::ari_pair_counting(a, b);
        worst = std::max(worst, std::fabs(lib - ref));
        if (std::fabs(lib - ref) > 1e-12) ++failures;

        if (adjusted_rand_index(a, a) != 1.0) ++failures;

        // Relabeling either side must not change the score.
        LabelVector shuffled(n);
        for (int i = 0; i < n; ++i) shuffled[i] = 7 - 2 * b[i];
        if (std::fabs(adjusted_rand_index(a, shuffled) - lib) > 1e-12) ++failures;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "adjusted Rand index matches pair counting on 200 instances (worst %.2e)", worst);
    return report(9, buf, failures == 0);
}

// --- 10. External movement-recordings dataset, reported but never gating. ---

void criterion_10() {
    const char* path = std::getenv("BCC_LIBRAS_CSV");
    if (path == nullptr || path[0] == '\0') {
        report(10, "external dataset check skipped (set BCC_LIBRAS_CSV to a labeled CSV to run); "
                   "informational only",
               true);
        return;
    }
    try {
        const LoadedCsv csv = load_csv(path, false, -1);
        const DataMatrix xs = standardize(DataMatrix(csv.values));
        Hyperparameters cfg;
        cfg.gamma = 50.0;
        cfg.lambda = 0.2;
        cfg.k_neighbors = 5;
        cfg.affinity_update = AffinityUpdate::every_iteration;
        cfg.inner_sweeps = 1;
        cfg.max_iter = 60;
        const FitResult res = fit(xs, cfg);
        const Matrix dist = centroid_distance_matrix(res.mu, res.w, cfg.lambda);
        const Dendrogram dendro = average_linkage(dist);
        const LabelVector labels =
            cut_dendrogram(dendro, CutStrategy::fixed_k(n_clusters(csv.labels)), &dist);
        const double ari = adjusted_rand_index(csv.labels, labels);
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "external dataset ARI %.3f (%s the reference band 0.79 +- 0.10); "
                      "informational only",
                      ari, std::fabs(ari - 0.79) <= 0.1 ? "inside" : "outside");
        report(10, buf, true);
    } catch (const std::exception& e) {
        report(10, std::string("external dataset check errored (") + e.what() +
                       "); informational only",
               true);
    }
}

}  // namespace

int main() {
    bool all = true;
    all &= criterion_1();
    all &= criterion_2();
    all &= criterion_3();
    all &= criterion_4();
    all &= criterion_5();
    all &= criterion_6();
    all &= criterion_7();
    all &= criterion_8();
    all &= criterion_9();
    criterion_10();
    std::printf("%s\n", all ? "all gating criteria passed" : "ACCEPTANCE FAILURE");
    return all ? 0 : 1;
}
