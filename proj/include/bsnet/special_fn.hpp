#pragma once

namespace bsnet::special {

/// Logistic sigmoid 1/(1+exp(-x)), branch-stable for large |x|.
double sigmoid(double x) noexcept;

/// Derivatives of the sigmoid with respect to its argument; order must be 1 or 2.
double sigmoid_deriv(double x, int order);

// Derivatives of the sigmoid expressed through s = sigmoid(x). Used by the
// network kernels, which already hold s.
inline double sigmoid_d1_from(double s) noexcept { return s * (1.0 - s); }
inline double sigmoid_d2_from(double s) noexcept { return s * (1.0 - s) * (1.0 - 2.0 * s); }
inline double sigmoid_d3_from(double s) noexcept {
    return s * (1.0 - s) * (1.0 - 6.0 * s + 6.0 * s * s);
}

/// Gamma function for z > 0. Throws DomainError otherwise.
double gamma_fn(double z);

/// Standard normal cumulative distribution function.
double normal_cdf(double x) noexcept;

} // namespace bsnet::special
