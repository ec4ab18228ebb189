#include "bcc/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace bcc {

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0, 1] x [0, 1) uniforms; u1 > 0 guards log(0).
    double u1;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    // Accept draws below the largest multiple of n.
    const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
    for (;;) {
        const std::uint64_t r = engine_();
        if (rem == 0 || r < std::numeric_limits<std::uint64_t>::max() - rem + 1) return r % n;
    }
}

DataMatrix standardize(const DataMatrix& x) {
    const int n = x.n();
    const int p = x.p();
    Matrix out = x.values;
    for (int l = 0; l < p; ++l) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += out(i, l);
        const double mean = sum / n;
        double ss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = out(i, l) - mean;
            ss += d * d;
        }
        if (ss == 0.0)
            throw std::invalid_argument("standardize: column " + std::to_string(l) + " is constant");
        const double sd = std::sqrt(ss / (n - 1));
        for (int i = 0; i < n; ++i) out(i, l) = (out(i, l) - mean) / sd;
    }
    return DataMatrix(std::move(out));
}

LabeledDataset gen_corners(int n_per_cluster, int d_noise, double sd, std::uint64_t seed) {
    if (n_per_cluster < 1) throw std::invalid_argument("gen_corners: n_per_cluster must be >= 1");
    if (d_noise < 0) throw std::invalid_argument("gen_corners: d_noise must be >= 0");
    if (!(sd > 0.0)) throw std::invalid_argument("gen_corners: sd must be > 0");

    const int n = 4 * n_per_cluster;
    const int p = 2 + d_noise;
    Matrix m(n, p);
    LabelVector truth(n);
    Rng rng(seed);
    // Corners in cluster order: (-1,-1), (1,-1), (-1,1), (1,1).
    for (int i = 0; i < n; ++i) {
        const int c = i / n_per_cluster;
        truth[i] = c;
        const double cx = (c & 1) ? 1.0 : -1.0;
        const double cy = (c & 2) ? 1.0 : -1.0;
        m(i, 0) = rng.normal(cx, sd);
        m(i, 1) = rng.normal(cy, sd);
        for (int l = 2; l < p; ++l) m(i, l) = rng.normal();
    }
    return LabeledDataset{DataMatrix(std::move(m)), std::move(truth), {0, 1}};
}

LabeledDataset gen_sparse_centers(int n, int p, int k, int n_informative, double spread_sd,
                                  std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_sparse_centers: n must be >= 2");
    if (k < 1) throw std::invalid_argument("gen_sparse_centers: k must be >= 1");
    if (n_informative < 0 || n_informative > p)
        throw std::invalid_argument("gen_sparse_centers: need 0 <= n_informative <= p");
    if (p < 1) throw std::invalid_argument("gen_sparse_centers: p must be >= 1");
    if (!(spread_sd > 0.0)) throw std::invalid_argument("gen_sparse_centers: spread_sd must be > 0");

    Rng rng(seed);
    Matrix centers(k, std::max(n_informative, 1));
    for (int j = 0; j < k; ++j)
        for (int l = 0; l < n_informative; ++l) centers(j, l) = rng.uniform01();

    Matrix m(n, p);
    LabelVector truth(n);
    for (int i = 0; i < n; ++i) {
        const int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
        truth[i] = c;
        for (int l = 0; l < n_informative; ++l) m(i, l) = rng.normal(centers(c, l), spread_sd);
        for (int l = n_informative; l < p; ++l) m(i, l) = rng.normal();
    }
    std::vector<int> informative(n_informative);
    for (int l = 0; l < n_informative; ++l) informative[l] = l;
    return LabeledDataset{DataMatrix(std::move(m)), std::move(truth), std::move(informative)};
}

LabeledDataset gen_motivating(std::uint64_t seed) {
    const int n_per = 100;
    const int p = 14;
    const int n = 2 * n_per;
    Matrix m(n, p);
    LabelVector truth(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        const int c = i / n_per;
        truth[i] = c;
        const double mean = c == 0 ? -1.0 : 1.0;  // cluster means (-1,-1) and (1,1)
        m(i, 0) = rng.normal(mean, 0.25);
        m(i, 1) = rng.normal(mean, 0.25);
        for (int l = 2; l < p; ++l) m(i, l) = rng.normal();
    }
    return LabeledDataset{DataMatrix(std::move(m)), std::move(truth), {0, 1}};
}

namespace {
// Map arbitrary label values to contiguous ids by first occurrence.
std::vector<int> factorize(const LabelVector& labels, int& count) {
    std::unordered_map<int, int> ids;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        out[i] = ids.try_emplace(labels[i], static_cast<int>(ids.size())).first->second;
    count = static_cast<int>(ids.size());
    return out;
}

double choose2(double x) { return 0.5 * x * (x - 1.0); }
}  // namespace

double adjusted_rand_index(const LabelVector& a, const LabelVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("adjusted_rand_index: length mismatch");
    if (a.empty()) throw std::invalid_argument("adjusted_rand_index: empty labels");
    const int n = static_cast<int>(a.size());

    int ca = 0, cb = 0;
    const std::vector<int> fa = factorize(a, ca);
    const std::vector<int> fb = factorize(b, cb);

    Matrix table(ca, cb);
    std::vector<double> row(ca, 0.0), col(cb, 0.0);
    for (int i = 0; i < n; ++i) {
        table(fa[i], fb[i]) += 1.0;
        row[fa[i]] += 1.0;
        col[fb[i]] += 1.0;
    }

    double sum_ij = 0.0;
    for (double v : table.data) sum_ij += choose2(v);
    double sum_a = 0.0, sum_b = 0.0;
    for (double v : row) sum_a += choose2(v);
    for (double v : col) sum_b += choose2(v);

    const double pairs = choose2(static_cast<double>(n));
    const double expected = pairs > 0.0 ? sum_a * sum_b / pairs : 0.0;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index - expected == 0.0) return 1.0;  // both partitions trivial
    return (sum_ij - expected) / (max_index - expected);
}

SelectionMetrics selection_metrics(const WeightVector& w, const std::vector<int>& informative) {
    const int p = w.size();
    std::vector<char> is_informative(p, 0);
    for (int l : informative) {
        if (l < 0 || l >= p) throw std::invalid_argument("selection_metrics: index out of range");
        is_informative[l] = 1;
    }

    int support = 0, hit = 0, zeros = 0;
    for (int l = 0; l < p; ++l) {
        if (w[l] > 0.0) {
            ++support;
            if (is_informative[l]) ++hit;
        }
        if (w[l] == 0.0) ++zeros;
    }
    int n_informative = 0;
    for (char f : is_informative) n_informative += f;

    SelectionMetrics out;
    out.support_precision = support > 0 ? static_cast<double>(hit) / support : 0.0;
    out.support_recall = n_informative > 0 ? static_cast<double>(hit) / n_informative : 1.0;
    out.exact_zero_count = zeros;
    return out;
}

}  // namespace bcc
