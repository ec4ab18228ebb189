#pragma once

#include "bcc/types.hpp"

namespace bcc {

/// Distance metric for neighbor search and kernel evaluation: plain Euclidean
/// or the norm induced by the current feature weights. The weighted form
/// keeps only features with a nonzero coefficient, so distances get cheaper
/// as the weights sparsify.
class DistanceMetric {
public:
    static DistanceMetric euclidean() { return DistanceMetric(); }

    static DistanceMetric weighted(const WeightVector& w, double lambda) {
        DistanceMetric m;
        m.euclidean_ = false;
        for (int l = 0; l < w.size(); ++l) {
            const double c = w[l] * w[l] + lambda * w[l];
            if (c > 0.0) m.active_.push_back({l, c});
        }
        return m;
    }

    /// Squared distance between rows i and j of x.
    double squared(const Matrix& x, int i, int j) const {
        const double* a = x.row(i);
        const double* b = x.row(j);
        double acc = 0.0;
        if (euclidean_) {
            for (int l = 0; l < x.cols; ++l) {
                const double d = a[l] - b[l];
                acc += d * d;
            }
        } else {
            for (const auto& [l, c] : active_) {
                const double d = a[l] - b[l];
                acc += c * d * d;
            }
        }
        return acc;
    }

    bool is_euclidean() const { return euclidean_; }

private:
    DistanceMetric() = default;
    bool euclidean_ = true;
    std::vector<std::pair<int, double>> active_;  // (feature, coefficient)
};

/// For each row i, the k indices j != i with smallest metric distance.
/// Ties are broken by ascending index j, so output is deterministic.
std::vector<std::vector<int>> knn_indices(const Matrix& x, int k, const DistanceMetric& metric);

/// Gaussian-kernel affinities over the k-NN edge set:
///   phi_ij = exp(-d^2(i, j) / scale) for j in i's neighbor list.
/// Initial affinities use the Euclidean metric with scale = tau; adaptive
/// updates use the weighted metric with scale = p.
AffinityGraph compute_affinities(const Matrix& x, int k, const DistanceMetric& metric, double scale);

}  // namespace bcc
