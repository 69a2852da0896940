#include "bsnet/special_fn.hpp"

#include <cmath>
#include <string>

#include "bsnet/errors.hpp"

namespace bsnet::special {

double sigmoid(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double sigmoid_deriv(double x, int order) {
    const double s = sigmoid(x);
    switch (order) {
    case 1: return sigmoid_d1_from(s);
    case 2: return sigmoid_d2_from(s);
    default:
        throw ContractViolation("sigmoid_deriv: order must be 1 or 2, got " +
                                std::to_string(order));
    }
}

double gamma_fn(double z) {
    if (!(z > 0.0) || !std::isfinite(z))
        throw DomainError("gamma_fn: argument must be positive and finite");
    return std::tgamma(z);
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace bsnet::special
