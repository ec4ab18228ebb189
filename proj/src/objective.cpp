#include "bcc/objective.hpp"

namespace bcc {

std::vector<double> norm_coefficients(const WeightVector& w, double lambda) {
    std::vector<double> coef(w.size());
    for (int l = 0; l < w.size(); ++l) coef[l] = w[l] * w[l] + lambda * w[l];
    return coef;
}

double weighted_norm_sq(const std::vector<double>& y, const WeightVector& w, double lambda) {
    if (static_cast<int>(y.size()) != w.size())
        throw std::invalid_argument("weighted_norm_sq: dimension mismatch");
    double acc = 0.0;
    for (int l = 0; l < w.size(); ++l) {
        const double c = w[l] * w[l] + lambda * w[l];
        acc += c * y[l] * y[l];
    }
    return acc;
}

double objective_value(const Matrix& x, const CentroidMatrix& mu, const WeightVector& w,
                       const AffinityGraph& phi, double gamma, double lambda,
                       const HoldoutMask* mask) {
    if (!x.same_shape(mu)) throw std::invalid_argument("objective_value: shape mismatch");
    if (w.size() != x.cols) throw std::invalid_argument("objective_value: weight length mismatch");
    if (phi.size() != x.rows) throw std::invalid_argument("objective_value: affinity node count mismatch");

    const int n = x.rows;
    const int p = x.cols;
    const std::vector<double> coef = norm_coefficients(w, lambda);

    double fit = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* xi = x.row(i);
        const double* mi = mu.row(i);
        double acc = 0.0;
        for (int l = 0; l < p; ++l) {
            if (mask != nullptr && mask->is_held(i, l)) continue;
            const double d = xi[l] - mi[l];
            acc += coef[l] * d * d;
        }
        fit += acc;
    }

    double fusion = 0.0;
    if (gamma > 0.0) {
        for (const AffinityGraph::Triple& e : phi.edges()) {
            const double* a = mu.row(e.i);
            const double* b = mu.row(e.j);
            double d2 = 0.0;
            for (int l = 0; l < p; ++l) {
                const double d = a[l] - b[l];
                d2 += d * d;
            }
            fusion += e.phi * d2;
        }
    }
    return fit + gamma * fusion;
}

}  // namespace bcc
