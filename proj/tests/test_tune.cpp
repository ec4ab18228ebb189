#include <cmath>

#include "bcc/bench.hpp"
#include "bcc/tune.hpp"
#include "doctest.h"

using namespace bcc;

TEST_CASE("holdout mask size, coverage, determinism") {
    const HoldoutMask mask = make_holdout_mask(100, 50, 0.1, 3);
    CHECK(mask.cells.size() == 500);  // round(0.1 * 5000)
    CHECK(mask.count() == 500);
    CHECK(mask.fraction == 0.1);

    std::vector<int> row_obs(100, 0), col_obs(50, 0);
    for (int i = 0; i < 100; ++i)
        for (int l = 0; l < 50; ++l)
            if (!mask.is_held(i, l)) {
                ++row_obs[i];
                ++col_obs[l];
            }
    for (int v : row_obs) CHECK(v >= 1);
    for (int v : col_obs) CHECK(v >= 1);

    // No duplicate cells.
    long held = 0;
    for (int i = 0; i < 100; ++i)
        for (int l = 0; l < 50; ++l)
            if (mask.is_held(i, l)) ++held;
    CHECK(held == 500);

    const HoldoutMask again = make_holdout_mask(100, 50, 0.1, 3);
    CHECK(again.cells == mask.cells);
    const HoldoutMask other = make_holdout_mask(100, 50, 0.1, 4);
    CHECK(other.cells != mask.cells);
}

TEST_CASE("holdout mask small and infeasible cases") {
    const HoldoutMask tiny = make_holdout_mask(2, 2, 0.25, 9);
    CHECK(tiny.count() == 1);

    // round(0.8 * 9) = 7 > 9 - max(3, 3): cannot keep all rows and columns.
    CHECK_THROWS_AS(make_holdout_mask(3, 3, 0.8, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_holdout_mask(3, 3, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_holdout_mask(3, 3, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_holdout_mask(0, 3, 0.1, 1), std::invalid_argument);
}

TEST_CASE("masked fit with an empty mask reproduces the plain fit") {
    const LabeledDataset data = gen_corners(5, 2, 0.3, 40);
    Hyperparameters cfg;
    cfg.gamma = 4.0;
    cfg.lambda = 0.15;
    cfg.k_neighbors = 4;

    const HoldoutMask empty(data.x.n(), data.x.p());
    const FitResult masked = fit_masked(data.x, empty, cfg);
    const FitResult plain = fit(data.x, cfg);
    CHECK(masked.mu.data == plain.mu.data);
    CHECK(masked.w == plain.w);
    CHECK(masked.objective_trace == plain.objective_trace);
}

TEST_CASE("masked fit descends and ignores held-out values") {
    const LabeledDataset data = gen_corners(6, 3, 0.3, 41);
    const int n = data.x.n(), p = data.x.p();
    const HoldoutMask mask = make_holdout_mask(n, p, 0.15, 7);
    Hyperparameters cfg;
    cfg.gamma = 4.0;
    cfg.lambda = 0.15;
    cfg.k_neighbors = 5;

    const FitResult a = fit_masked(data.x, mask, cfg);
    CHECK(a.converged);
    for (std::size_t t = 1; t < a.objective_trace.size(); ++t)
        CHECK(a.objective_trace[t] <= a.objective_trace[t - 1] + 1e-9);

    CHECK_THROWS_AS(fit_masked(data.x, HoldoutMask(n + 1, p), cfg), std::invalid_argument);
}

TEST_CASE("a held-out centroid lands on the affinity-weighted neighbor average") {
    Matrix xm(3, 2);
    xm(0, 0) = 0.0;
    xm(0, 1) = 1.0;
    xm(1, 0) = 2.0;
    xm(1, 1) = 3.0;
    xm(2, 0) = 10.0;
    xm(2, 1) = -4.0;
    HoldoutMask mask(3, 2);
    mask.mark(2, 0);  // the last row finishes each sweep, so its held cell
                      // is exactly the weighted mean of the final neighbors
    Hyperparameters cfg;
    cfg.gamma = 2.0;
    cfg.lambda = 0.1;
    cfg.k_neighbors = 2;

    const FitResult res = fit_masked(DataMatrix(xm), mask, cfg);
    double acc = 0.0, s = 0.0;
    for (const auto& e : res.phi.out(2)) {
        acc += e.phi * res.mu(e.other, 0);
        s += e.phi;
    }
    for (const auto& e : res.phi.in(2)) {
        acc += e.phi * res.mu(e.other, 0);
        s += e.phi;
    }
    REQUIRE(s > 0.0);
    CHECK(res.mu(2, 0) == doctest::Approx(acc / s).epsilon(1e-12));
}

TEST_CASE("held-out cells start at the observed column mean, not the held value") {
    Matrix xm(3, 2);
    xm(0, 0) = 1.0;
    xm(1, 0) = 3.0;
    xm(2, 0) = 100.0;  // held out; observed mean of column 0 is 2
    xm(0, 1) = 5.0;
    xm(1, 1) = 6.0;
    xm(2, 1) = 7.0;
    HoldoutMask mask(3, 2);
    mask.mark(2, 0);
    Hyperparameters cfg;
    cfg.gamma = 0.0;  // the held cell has no data term and no fusion: it never moves
    cfg.k_neighbors = 1;
    const FitResult res = fit_masked(DataMatrix(xm), mask, cfg);
    CHECK(res.mu(2, 0) == 2.0);
    CHECK(res.degenerate_cells > 0);
}

TEST_CASE("validation error sums squared holdout residuals") {
    Matrix x(2, 2), mu(2, 2);
    x(0, 0) = 1.0;
    x(1, 1) = 2.0;
    mu(0, 0) = 0.5;
    mu(1, 1) = -1.0;
    HoldoutMask mask(2, 2);
    mask.mark(0, 0);
    mask.mark(1, 1);
    CHECK(validation_error(x, mu, mask) == doctest::Approx(0.25 + 9.0).epsilon(1e-15));

    const HoldoutMask empty(2, 2);
    CHECK(validation_error(x, mu, empty) == 0.0);
    CHECK_THROWS_AS(validation_error(x, Matrix(3, 2), mask), std::invalid_argument);
}

TEST_CASE("validation error matches a naive loop on a random instance") {
    Rng rng(606060);
    Matrix x(6, 4), mu(6, 4);
    for (double& v : x.data) v = rng.normal();
    for (double& v : mu.data) v = rng.normal();
    HoldoutMask mask(6, 4);
    for (int i = 0; i < 6; ++i) mask.mark(i, static_cast<int>(rng.below(4)));
    double ref = 0.0;
    for (const auto& cell : mask.cells) {
        const double diff = x(cell.first, cell.second) - mu(cell.first, cell.second);
        ref += diff * diff;
    }
    CHECK(std::fabs(validation_error(x, mu, mask) - ref) <= 1e-12 * (1.0 + ref));
}

TEST_CASE("grid search scores the full grid and breaks ties deterministically") {
    const LabeledDataset data = gen_corners(5, 2, 0.3, 42);
    Hyperparameters cfg;
    cfg.k_neighbors = 4;
    MaskParams mp;
    mp.fraction = 0.1;
    mp.seed = 11;

    const std::vector<double> lambdas = {0.0, 0.2};
    const std::vector<double> gammas = {1.0, 5.0};
    const GridSearchResult res = grid_search(data.x, lambdas, gammas, mp, cfg);
    REQUIRE(res.table.size() == 4);
    // lambda-major, gamma-minor order
    CHECK(res.table[0].lambda == 0.0);
    CHECK(res.table[0].gamma == 1.0);
    CHECK(res.table[1].lambda == 0.0);
    CHECK(res.table[1].gamma == 5.0);
    CHECK(res.table[2].lambda == 0.2);
    CHECK(res.table[3].lambda == 0.2);

    double best = res.table[0].validation_error;
    for (const auto& e : res.table) best = std::min(best, e.validation_error);
    CHECK(res.best_error == best);

    bool found = false;
    for (const auto& e : res.table)
        if (e.lambda == res.best_lambda && e.gamma == res.best_gamma) {
            CHECK(e.validation_error == res.best_error);
            found = true;
        }
    CHECK(found);

    const GridSearchResult again = grid_search(data.x, lambdas, gammas, mp, cfg);
    CHECK(again.best_lambda == res.best_lambda);
    CHECK(again.best_gamma == res.best_gamma);
    CHECK(again.best_error == res.best_error);
    for (std::size_t e = 0; e < res.table.size(); ++e)
        CHECK(again.table[e].validation_error == res.table[e].validation_error);
}

TEST_CASE("grid search tie-break prefers smaller gamma then smaller lambda") {
    // A duplicated grid point forces exact ties; the first occurrence in
    // (smaller gamma, then smaller lambda) order must win.
    const LabeledDataset data = gen_corners(4, 2, 0.3, 43);
    Hyperparameters cfg;
    cfg.k_neighbors = 3;
    MaskParams mp;
    mp.seed = 5;

    const GridSearchResult res = grid_search(data.x, {0.1, 0.1}, {2.0, 2.0}, mp, cfg);
    REQUIRE(res.table.size() == 4);
    CHECK(res.table[0].validation_error == res.table[3].validation_error);
    CHECK(res.best_gamma == 2.0);
    CHECK(res.best_lambda == 0.1);
}

TEST_CASE("grid search single cell and validation") {
    const LabeledDataset data = gen_corners(4, 1, 0.3, 44);
    Hyperparameters cfg;
    cfg.k_neighbors = 3;
    MaskParams mp;

    const GridSearchResult res = grid_search(data.x, {0.3}, {2.0}, mp, cfg);
    CHECK(res.best_lambda == 0.3);
    CHECK(res.best_gamma == 2.0);
    CHECK(res.table.size() == 1);
    CHECK(res.mask.count() > 0);

    CHECK_THROWS_AS(grid_search(data.x, {}, {1.0}, mp, cfg), std::invalid_argument);
    CHECK_THROWS_AS(grid_search(data.x, {0.1}, {}, mp, cfg), std::invalid_argument);
    CHECK_THROWS_AS(grid_search(data.x, {-0.1}, {1.0}, mp, cfg), std::invalid_argument);
    CHECK_THROWS_AS(grid_search(data.x, {0.1}, {-1.0}, mp, cfg), std::invalid_argument);
}

TEST_CASE("grid search rewards fusion on fusible data") {
    // Corner clusters with modest noise: gamma = 0 cannot reconstruct held-out
    // cells at all (their centroids never move off the initialization), so a
    // positive gamma must win.
    const LabeledDataset data = gen_corners(8, 2, 0.3, 45);
    Hyperparameters cfg;
    cfg.k_neighbors = 5;
    MaskParams mp;
    mp.fraction = 0.1;
    mp.seed = 2;
    const GridSearchResult res = grid_search(data.x, {0.1}, {0.0, 5.0}, mp, cfg);
    CHECK(res.best_gamma == 5.0);
    CHECK(res.table[0].validation_error > res.table[1].validation_error);
}
