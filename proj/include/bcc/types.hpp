#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bcc {

/// Dense row-major matrix of doubles. Shared storage type for data matrices
/// (rows are samples) and centroid matrices (one centroid row per sample).
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {
        if (r < 0 || c < 0) throw std::invalid_argument("Matrix: negative shape");
    }

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    double* row(int i) { return data.data() + static_cast<std::size_t>(i) * cols; }
    const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * cols; }

    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Observation matrix: n samples by p features, all entries finite, n >= 2.
struct DataMatrix {
    Matrix values;

    DataMatrix() = default;
    explicit DataMatrix(Matrix m) : values(std::move(m)) {
        if (values.rows < 2) throw std::invalid_argument("DataMatrix: need at least 2 samples");
        if (values.cols < 1) throw std::invalid_argument("DataMatrix: need at least 1 feature");
        if (!values.all_finite()) throw std::invalid_argument("DataMatrix: non-finite entry");
    }

    int n() const { return values.rows; }
    int p() const { return values.cols; }
};

/// Centroid matrices share the data matrix shape; kept as a plain Matrix and
/// shape-checked at operation boundaries.
using CentroidMatrix = Matrix;

/// Nonnegative feature weights on the unit simplex.
class WeightVector {
public:
    static constexpr double kSimplexTol = 1e-8;

    WeightVector() = default;

    static WeightVector uniform(int p) {
        if (p < 1) throw std::invalid_argument("WeightVector: p must be >= 1");
        WeightVector w;
        w.w_.assign(p, 1.0 / p);
        return w;
    }

    /// Validates nonnegativity and the sum-to-one constraint (within kSimplexTol).
    static WeightVector from(std::vector<double> values) {
        double sum = 0.0;
        for (double v : values) {
            if (!(v >= 0.0)) throw std::invalid_argument("WeightVector: negative or NaN weight");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > kSimplexTol)
            throw std::invalid_argument("WeightVector: weights sum to " + std::to_string(sum));
        WeightVector w;
        w.w_ = std::move(values);
        return w;
    }

    int size() const { return static_cast<int>(w_.size()); }
    double operator[](int l) const { return w_[l]; }
    const std::vector<double>& values() const { return w_; }

    bool operator==(const WeightVector& other) const { return w_ == other.w_; }

private:
    std::vector<double> w_;
};

/// Sparse directed nonnegative affinities phi_ij over ordered pairs i != j.
///
/// Edges are stored in insertion order, both in a flat list and in per-node
/// out/in lists. The centroid update consumes both phi_ij and phi_ji, so no
/// symmetrization is performed. Per-node lists preserve the global insertion
/// order, which makes relabeled() exactly order-preserving (accumulations in
/// the solver then permute bit-for-bit).
class AffinityGraph {
public:
    struct Edge {
        int other;   // neighbor index (target for out-lists, source for in-lists)
        double phi;
    };
    struct Triple {
        int i, j;
        double phi;
    };

    AffinityGraph() = default;
    explicit AffinityGraph(int n) : n_(n), out_(n), in_(n) {
        if (n < 0) throw std::invalid_argument("AffinityGraph: negative node count");
    }

    void add_edge(int i, int j, double phi) {
        if (i < 0 || i >= n_ || j < 0 || j >= n_)
            throw std::invalid_argument("AffinityGraph: node index out of range");
        if (i == j) throw std::invalid_argument("AffinityGraph: self-loop");
        if (!(phi >= 0.0)) throw std::invalid_argument("AffinityGraph: negative or NaN affinity");
        edges_.push_back({i, j, phi});
        out_[i].push_back({j, phi});
        in_[j].push_back({i, phi});
    }

    int size() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Triple>& edges() const { return edges_; }
    const std::vector<Edge>& out(int i) const { return out_[i]; }
    const std::vector<Edge>& in(int j) const { return in_[j]; }

    /// Sum of incident affinities per node: sum_j phi_ij + sum_j phi_ji,
    /// accumulated in stored edge order (out-list first).
    std::vector<double> incident_sums() const {
        std::vector<double> s(n_, 0.0);
        for (int i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (const Edge& e : out_[i]) acc += e.phi;
            for (const Edge& e : in_[i]) acc += e.phi;
            s[i] = acc;
        }
        return s;
    }

    /// Node relabeling: edge (i, j) becomes (perm[i], perm[j]), insertion
    /// order preserved.
    AffinityGraph relabeled(const std::vector<int>& perm) const {
        if (static_cast<int>(perm.size()) != n_)
            throw std::invalid_argument("AffinityGraph: permutation size mismatch");
        AffinityGraph g(n_);
        for (const Triple& e : edges_) g.add_edge(perm[e.i], perm[e.j], e.phi);
        return g;
    }

    bool operator==(const AffinityGraph& other) const {
        if (n_ != other.n_ || edges_.size() != other.edges_.size()) return false;
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            if (edges_[e].i != other.edges_[e].i || edges_[e].j != other.edges_[e].j ||
                edges_[e].phi != other.edges_[e].phi)
                return false;
        }
        return true;
    }

    /// Same edge set in the same order with values equal within tol.
    bool approx_equal(const AffinityGraph& other, double tol) const {
        if (n_ != other.n_ || edges_.size() != other.edges_.size()) return false;
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            if (edges_[e].i != other.edges_[e].i || edges_[e].j != other.edges_[e].j) return false;
            if (std::fabs(edges_[e].phi - other.edges_[e].phi) > tol) return false;
        }
        return true;
    }

private:
    int n_ = 0;
    std::vector<Triple> edges_;
    std::vector<std::vector<Edge>> out_;
    std::vector<std::vector<Edge>> in_;
};

enum class AffinityUpdate { never, every_iteration, every_m_iterations };

struct Hyperparameters {
    double gamma = 1.0;           // fusion strength, >= 0
    double lambda = 0.0;          // sparsity strength, >= 0
    int k_neighbors = 5;          // k-NN count, >= 1
    double tau = 1.0;             // kernel bandwidth for initial affinities, > 0
    int max_iter = 500;
    double tol_objective = 1e-6;  // relative objective change
    AffinityUpdate affinity_update = AffinityUpdate::never;
    int affinity_every_m = 1;     // cadence when affinity_update == every_m_iterations
    int inner_sweeps = 1;         // centroid sweeps per outer iteration, >= 1

    void validate() const {
        if (!(gamma >= 0.0)) throw std::invalid_argument("Hyperparameters: gamma must be >= 0");
        if (!(lambda >= 0.0)) throw std::invalid_argument("Hyperparameters: lambda must be >= 0");
        if (k_neighbors < 1) throw std::invalid_argument("Hyperparameters: k_neighbors must be >= 1");
        if (!(tau > 0.0)) throw std::invalid_argument("Hyperparameters: tau must be > 0");
        if (max_iter < 1) throw std::invalid_argument("Hyperparameters: max_iter must be >= 1");
        if (!(tol_objective >= 0.0)) throw std::invalid_argument("Hyperparameters: tol_objective must be >= 0");
        if (affinity_update == AffinityUpdate::every_m_iterations && affinity_every_m < 1)
            throw std::invalid_argument("Hyperparameters: affinity cadence must be >= 1");
        if (inner_sweeps < 1) throw std::invalid_argument("Hyperparameters: inner_sweeps must be >= 1");
    }
};

/// Result of one complete fit. The final affinities are stored even when
/// affinity updates were disabled so downstream assignment is reproducible
/// from the result alone.
struct FitResult {
    CentroidMatrix mu;
    WeightVector w;
    AffinityGraph phi;
    std::vector<double> objective_trace;  // entry 0 at initialization, then one per iteration
    int iterations = 0;
    bool converged = false;
    long degenerate_cells = 0;  // centroid cells left unchanged due to a zero denominator
    int affinity_updates = 0;   // number of times phi actually changed
};

/// Held-out cell set for matrix-completion style tuning. No row or column is
/// ever fully held out.
struct HoldoutMask {
    int n = 0;
    int p = 0;
    std::vector<std::uint8_t> held;          // n*p flags, row-major
    std::vector<std::pair<int, int>> cells;  // held-out cells in draw order
    double fraction = 0.0;

    HoldoutMask() = default;
    HoldoutMask(int n_, int p_) : n(n_), p(p_), held(static_cast<std::size_t>(n_) * p_, 0) {}

    bool is_held(int i, int l) const { return held[static_cast<std::size_t>(i) * p + l] != 0; }
    std::size_t count() const { return cells.size(); }

    void mark(int i, int l) {
        held[static_cast<std::size_t>(i) * p + l] = 1;
        cells.emplace_back(i, l);
    }
};

/// Cluster labels, contiguous ids starting at 0.
using LabelVector = std::vector<int>;

inline int n_clusters(const LabelVector& labels) {
    int c = 0;
    for (int v : labels) c = std::max(c, v + 1);
    return c;
}

}  // namespace bcc
