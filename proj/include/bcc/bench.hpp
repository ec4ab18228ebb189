#pragma once

#include <cstdint>
#include <random>

#include "bcc/types.hpp"

namespace bcc {

/// Seedable random source with pinned output transforms. The engine is
/// mt19937_64 (bit-exact everywhere by the standard); the derived draws
/// (53-bit uniforms, Box-Muller normals, rejection-sampled integers) are
/// implemented here rather than via distribution classes, whose streams vary
/// across standard libraries. kId names the scheme in output metadata.
class Rng {
public:
    static constexpr const char* kId = "mt19937_64/u53/box-muller/v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller; pairs are generated together and the
    /// spare is returned on the next call.
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Synthetic dataset with ground truth.
struct LabeledDataset {
    DataMatrix x;
    LabelVector truth;
    std::vector<int> informative;  // indices of features carrying cluster signal
};

/// Center and scale every column to sample mean 0 and sample standard
/// deviation 1 (n-1 divisor). Errors on a constant column.
DataMatrix standardize(const DataMatrix& x);

/// Four Gaussian clusters at the corners (+-1, +-1) on features 0-1 with
/// isotropic noise sd, plus d_noise standard-normal columns.
LabeledDataset gen_corners(int n_per_cluster, int d_noise, double sd, std::uint64_t seed);

/// k clusters whose centers are uniform(0,1) on the first n_informative
/// features; points draw their cluster uniformly, informative features are
/// Normal(center, spread_sd), the rest standard normal.
LabeledDataset gen_sparse_centers(int n = 1000, int p = 100, int k = 5, int n_informative = 5,
                                  double spread_sd = 0.015, std::uint64_t seed = 1);

/// Two clusters of 100 points with means (-1,-1) and (1,1) on features 0-1
/// (sd 0.25) plus twelve standard-normal noise columns.
LabeledDataset gen_motivating(std::uint64_t seed);

/// Chance-corrected partition agreement; 1 for identical partitions. Accepts
/// arbitrary integer label values.
double adjusted_rand_index(const LabelVector& a, const LabelVector& b);

struct SelectionMetrics {
    double support_precision = 0.0;  // fraction of positive-weight features that are informative
    double support_recall = 0.0;     // fraction of informative features given positive weight
    int exact_zero_count = 0;        // features with weight exactly 0
};

SelectionMetrics selection_metrics(const WeightVector& w, const std::vector<int>& informative);

}  // namespace bcc
