#pragma once

#include "bcc/types.hpp"

namespace bcc {

/// Soft-thresholding: shrink x toward zero by y >= 0, clipping to zero inside
/// the dead zone [-y, y].
inline double soft_threshold(double x, double y) {
    if (x >= y) return x - y;
    if (x <= -y) return x + y;
    return 0.0;
}

/// Squared norm induced by the feature weights:
///   ||y||_w^2 = sum_l (w_l^2 + lambda * w_l) * y_l^2.
double weighted_norm_sq(const std::vector<double>& y, const WeightVector& w, double lambda);

/// Per-feature coefficients w_l^2 + lambda * w_l of the induced norm.
std::vector<double> norm_coefficients(const WeightVector& w, double lambda);

/// Full biconvex clustering objective:
///   sum_i ||x_i - mu_i||_w^2 + gamma * sum_{(i,j)} phi_ij * ||mu_i - mu_j||_2^2.
/// Fit terms at held-out cells are skipped when a mask is given; the fusion
/// term is unaffected by masking.
double objective_value(const Matrix& x, const CentroidMatrix& mu, const WeightVector& w,
                       const AffinityGraph& phi, double gamma, double lambda,
                       const HoldoutMask* mask = nullptr);

}  // namespace bcc
