#include "bcc/assign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bcc/objective.hpp"
#include "parallel.hpp"

namespace bcc {

namespace {

void check_distance_matrix(const Matrix& dist) {
    if (dist.rows != dist.cols) throw std::invalid_argument("distance matrix must be square");
    if (dist.rows < 1) throw std::invalid_argument("distance matrix must be nonempty");
    for (int i = 0; i < dist.rows; ++i) {
        if (dist(i, i) != 0.0) throw std::invalid_argument("distance matrix must have zero diagonal");
        for (int j = 0; j < dist.cols; ++j) {
            const double v = dist(i, j);
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("distance matrix entries must be finite and nonnegative");
            if (v != dist(j, i)) throw std::invalid_argument("distance matrix must be symmetric");
        }
    }
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Labels after applying the first `count` merges, numbered by first occurrence.
LabelVector labels_from_prefix(const Dendrogram& dendro, int count) {
    const int n = dendro.n_leaves;
    DisjointSets sets(n + count);
    for (int m = 0; m < count; ++m) {
        const Dendrogram::Merge& mg = dendro.merges[m];
        sets.unite(mg.node_a, n + m);
        sets.unite(mg.node_b, n + m);
    }
    LabelVector labels(n, -1);
    std::vector<int> label_of_root(n + count, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int root = sets.find(i);
        if (label_of_root[root] < 0) label_of_root[root] = next++;
        labels[i] = label_of_root[root];
    }
    return labels;
}

LabelVector renumber_by_first_occurrence(const LabelVector& labels) {
    std::vector<int> remap(labels.size(), -1);
    LabelVector out(labels.size());
    int next = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (remap[labels[i]] < 0) remap[labels[i]] = next++;
        out[i] = remap[labels[i]];
    }
    return out;
}

LabelVector cut_at_height(const Dendrogram& dendro, double h) {
    // Heights are nondecreasing, so the kept merges form a prefix.
    int count = 0;
    while (count < static_cast<int>(dendro.merges.size()) && dendro.merges[count].height <= h)
        ++count;
    return labels_from_prefix(dendro, count);
}

LabelVector dissolve_small_clusters(LabelVector labels, int min_size, const Matrix& dist) {
    const int n = static_cast<int>(labels.size());
    const int c = n_clusters(labels);
    std::vector<int> sizes(c, 0);
    for (int lab : labels) ++sizes[lab];

    std::vector<int> survivors;
    for (int s = 0; s < c; ++s)
        if (sizes[s] >= min_size) survivors.push_back(s);
    // Nothing meets the floor: keep the raw cut rather than inventing structure.
    if (survivors.empty() || static_cast<int>(survivors.size()) == c)
        return renumber_by_first_occurrence(labels);

    std::vector<std::vector<int>> members(c);
    for (int i = 0; i < n; ++i) members[labels[i]].push_back(i);

    // Each undersized cluster joins the surviving cluster at minimal average
    // distance; survivor membership is fixed at the raw cut.
    std::vector<int> target(c);
    std::iota(target.begin(), target.end(), 0);
    for (int small = 0; small < c; ++small) {
        if (sizes[small] >= min_size) continue;
        double best = std::numeric_limits<double>::infinity();
        int best_s = survivors.front();
        for (int s : survivors) {
            double acc = 0.0;
            for (int i : members[small])
                for (int j : members[s]) acc += dist(i, j);
            const double avg = acc / (static_cast<double>(members[small].size()) * members[s].size());
            if (avg < best) {
                best = avg;
                best_s = s;
            }
        }
        target[small] = best_s;
    }
    for (int i = 0; i < n; ++i) labels[i] = target[labels[i]];
    return renumber_by_first_occurrence(labels);
}

}  // namespace

void Dendrogram::validate() const {
    if (n_leaves < 1) throw std::invalid_argument("dendrogram: need at least one leaf");
    if (static_cast<int>(merges.size()) != n_leaves - 1)
        throw std::invalid_argument("dendrogram: expected n-1 merges");
    std::vector<char> used(2 * n_leaves - 1, 0);
    double prev = 0.0;
    for (std::size_t m = 0; m < merges.size(); ++m) {
        const Merge& mg = merges[m];
        const int limit = n_leaves + static_cast<int>(m);
        if (mg.node_a < 0 || mg.node_b >= limit || mg.node_a >= mg.node_b)
            throw std::invalid_argument("dendrogram: bad merge nodes");
        if (used[mg.node_a] || used[mg.node_b])
            throw std::invalid_argument("dendrogram: node merged twice");
        used[mg.node_a] = used[mg.node_b] = 1;
        if (!(mg.height >= 0.0) || !std::isfinite(mg.height))
            throw std::invalid_argument("dendrogram: bad merge height");
        if (m > 0 && mg.height < prev)
            throw std::invalid_argument("dendrogram: heights must be nondecreasing");
        prev = mg.height;
    }
}

CutStrategy CutStrategy::at_height(double h) {
    CutStrategy s;
    s.kind = Kind::height;
    s.height = h;
    return s;
}

CutStrategy CutStrategy::largest_gap(int min_size) {
    if (min_size < 1) throw std::invalid_argument("largest_gap: min_size must be >= 1");
    CutStrategy s;
    s.kind = Kind::largest_gap;
    s.min_size = min_size;
    return s;
}

CutStrategy CutStrategy::fixed_k(int k) {
    if (k < 1) throw std::invalid_argument("fixed_k: k must be >= 1");
    CutStrategy s;
    s.kind = Kind::fixed_k;
    s.k = k;
    return s;
}

int default_min_size(int n) { return std::max(2, n / 50); }

Matrix centroid_distance_matrix(const CentroidMatrix& mu, const WeightVector& w, double lambda,
                                int threads) {
    if (w.size() != mu.cols) throw std::invalid_argument("centroid_distance_matrix: weight length mismatch");
    if (lambda < 0.0) throw std::invalid_argument("centroid_distance_matrix: negative lambda");
    const int n = mu.rows;
    const int p = mu.cols;
    const std::vector<double> coef = norm_coefficients(w, lambda);
    Matrix dist(n, n);
    auto rows = [&](int, int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const double* ri = mu.row(i);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double* rj = mu.row(j);
                double acc = 0.0;
                for (int l = 0; l < p; ++l) {
                    const double diff = ri[l] - rj[l];
                    acc += coef[l] * diff * diff;
                }
                dist(i, j) = std::sqrt(acc);
            }
        }
    };
    detail::parallel_chunks(n, detail::effective_threads(threads), rows);
    return dist;
}

Matrix euclidean_distance_matrix(const Matrix& m, int threads) {
    const int n = m.rows;
    const int p = m.cols;
    Matrix dist(n, n);
    auto rows = [&](int, int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const double* ri = m.row(i);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double* rj = m.row(j);
                double acc = 0.0;
                for (int l = 0; l < p; ++l) {
                    const double diff = ri[l] - rj[l];
                    acc += diff * diff;
                }
                dist(i, j) = std::sqrt(acc);
            }
        }
    };
    detail::parallel_chunks(n, detail::effective_threads(threads), rows);
    return dist;
}

Dendrogram average_linkage(const Matrix& dist) {
    check_distance_matrix(dist);
    const int n = dist.rows;

    Dendrogram dendro;
    dendro.n_leaves = n;
    if (n == 1) return dendro;

    // Working copy indexed by slot; a merge collapses two slots into one.
    Matrix work = dist;
    std::vector<int> node_id(n);
    std::iota(node_id.begin(), node_id.end(), 0);
    std::vector<int> size(n, 1);
    std::vector<char> alive(n, 1);

    double last_height = 0.0;
    for (int m = 0; m < n - 1; ++m) {
        int si = -1, sj = -1;
        double best = std::numeric_limits<double>::infinity();
        int best_a = -1, best_b = -1;
        for (int i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                const double d = work(i, j);
                const int a = std::min(node_id[i], node_id[j]);
                const int b = std::max(node_id[i], node_id[j]);
                if (d < best || (d == best && (a < best_a || (a == best_a && b < best_b)))) {
                    best = d;
                    best_a = a;
                    best_b = b;
                    si = i;
                    sj = j;
                }
            }
        }

        // Average linkage is monotone; the clamp only absorbs rounding noise.
        last_height = std::max(last_height, best);
        Dendrogram::Merge merge;
        merge.node_a = best_a;
        merge.node_b = best_b;
        merge.height = last_height;
        merge.merged_size = size[si] + size[sj];
        dendro.merges.push_back(merge);

        const double wi = static_cast<double>(size[si]);
        const double wj = static_cast<double>(size[sj]);
        for (int c = 0; c < n; ++c) {
            if (!alive[c] || c == si || c == sj) continue;
            const double d = (wi * work(si, c) + wj * work(sj, c)) / (wi + wj);
            work(si, c) = d;
            work(c, si) = d;
        }
        node_id[si] = n + m;
        size[si] += size[sj];
        alive[sj] = 0;
    }
    return dendro;
}

LabelVector cut_dendrogram(const Dendrogram& dendro, const CutStrategy& strategy,
                           const Matrix* dist) {
    dendro.validate();
    const int n = dendro.n_leaves;

    switch (strategy.kind) {
        case CutStrategy::Kind::height:
            return cut_at_height(dendro, strategy.height);

        case CutStrategy::Kind::fixed_k: {
            if (strategy.k < 1 || strategy.k > n)
                throw std::invalid_argument("cut_dendrogram: k must be in [1, n]");
            return labels_from_prefix(dendro, n - strategy.k);
        }

        case CutStrategy::Kind::largest_gap: {
            if (strategy.min_size < 1)
                throw std::invalid_argument("cut_dendrogram: min_size must be >= 1");
            if (strategy.min_size > 1 && dist == nullptr)
                throw std::invalid_argument(
                    "cut_dendrogram: largest-gap cut with min_size > 1 needs the distance matrix");
            if (dist != nullptr && dist->rows != n)
                throw std::invalid_argument("cut_dendrogram: distance matrix size mismatch");

            if (n == 1) return LabelVector{0};
            std::vector<double> heights;
            heights.reserve(dendro.merges.size());
            for (const Dendrogram::Merge& mg : dendro.merges) heights.push_back(mg.height);
            std::sort(heights.begin(), heights.end());

            double cut;
            if (heights.size() == 1) {
                cut = 0.5 * heights[0];  // no gaps to compare; split below the only merge
            } else {
                std::size_t best = 0;
                double best_gap = -1.0;
                for (std::size_t g = 0; g + 1 < heights.size(); ++g) {
                    const double gap = heights[g + 1] - heights[g];
                    if (gap >= best_gap) {  // ties resolve to the highest gap
                        best_gap = gap;
                        best = g;
                    }
                }
                cut = 0.5 * (heights[best] + heights[best + 1]);
            }
            LabelVector labels = cut_at_height(dendro, cut);
            if (strategy.min_size > 1) labels = dissolve_small_clusters(std::move(labels), strategy.min_size, *dist);
            return labels;
        }
    }
    throw std::logic_error("cut_dendrogram: unknown strategy");
}

}  // namespace bcc
