#pragma once

#include "bcc/types.hpp"

namespace bcc {

// Agglomeration history over n leaves. Leaves are nodes 0..n-1; the merge at
// index m creates node n+m, so internal nodes are n..2n-2.
struct Dendrogram {
    struct Merge {
        int node_a = 0;  // node_a < node_b
        int node_b = 0;
        double height = 0.0;
        int merged_size = 0;
    };
    int n_leaves = 0;
    std::vector<Merge> merges;

    void validate() const;
};

struct CutStrategy {
    enum class Kind { height, largest_gap, fixed_k };
    Kind kind = Kind::largest_gap;
    double height = 0.0;
    int min_size = 1;
    int k = 1;

    static CutStrategy at_height(double h);
    static CutStrategy largest_gap(int min_size);
    static CutStrategy fixed_k(int k);
};

// Default floor for the largest-gap cut: clusters smaller than this are
// dissolved into their nearest surviving neighbour.
int default_min_size(int n);

// Pairwise distances between centroid rows in the learned metric:
// sqrt(weighted_norm_sq(mu_i - mu_j, w, lambda)).
Matrix centroid_distance_matrix(const CentroidMatrix& mu, const WeightVector& w, double lambda,
                                int threads = 1);

// Plain Euclidean pairwise distances between rows.
Matrix euclidean_distance_matrix(const Matrix& m, int threads = 1);

Dendrogram average_linkage(const Matrix& dist);

// dist is consulted only by the largest-gap strategy (min_size > 1), which
// reassigns undersized clusters by average inter-cluster distance.
LabelVector cut_dendrogram(const Dendrogram& dendro, const CutStrategy& strategy,
                           const Matrix* dist = nullptr);

}  // namespace bcc
