#include "bcc/affinity.hpp"

#include <algorithm>
#include <cmath>

namespace bcc {

std::vector<std::vector<int>> knn_indices(const Matrix& x, int k, const DistanceMetric& metric) {
    const int n = x.rows;
    if (k < 1 || k > n - 1) throw std::invalid_argument("knn_indices: k out of range [1, n-1]");

    std::vector<std::vector<int>> neighbors(n);
    std::vector<std::pair<double, int>> cand;
    cand.reserve(n - 1);
    for (int i = 0; i < n; ++i) {
        cand.clear();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            cand.push_back({metric.squared(x, i, j), j});
        }
        // (distance, index) pairs sort with the index tie-break built in
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        std::vector<int>& out = neighbors[i];
        out.reserve(k);
        for (int r = 0; r < k; ++r) out.push_back(cand[r].second);
    }
    return neighbors;
}

AffinityGraph compute_affinities(const Matrix& x, int k, const DistanceMetric& metric, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("compute_affinities: scale must be > 0");
    const std::vector<std::vector<int>> neighbors = knn_indices(x, k, metric);
    AffinityGraph g(x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j : neighbors[i]) g.add_edge(i, j, std::exp(-metric.squared(x, i, j) / scale));
    return g;
}

}  // namespace bcc
