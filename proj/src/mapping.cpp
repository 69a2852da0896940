#include "bsnet/mapping.hpp"

#include <cmath>
#include <numbers>

#include "bsnet/errors.hpp"

namespace bsnet {

DomainMap DomainMap::truncated(double s_max) {
    if (!(s_max > 0.0)) throw ContractViolation("truncated map: s_max must be positive");
    DomainMap m;
    m.kind = MapKind::truncated;
    m.s_max = s_max;
    return m;
}

DomainMap DomainMap::arctan(double L, double right_eval_point) {
    if (!(L > 0.0)) throw ContractViolation("arctan map: L must be positive");
    if (!(right_eval_point > 0.99 && right_eval_point < 1.0))
        throw ContractViolation("arctan map: right_eval_point must lie in (0.99, 1)");
    DomainMap m;
    m.kind = MapKind::arctan;
    m.L = L;
    m.right_eval_point = right_eval_point;
    return m;
}

DomainMap make_arctan_map(double K, double l) {
    if (!(K > 0.0)) throw ContractViolation("make_arctan_map: K must be positive");
    if (!(l > 0.0 && l < 1.0)) throw ContractViolation("make_arctan_map: l must lie in (0, 1)");
    DomainMap m = DomainMap::arctan(K / std::tan(0.5 * std::numbers::pi * l));
    m.l = l;
    return m;
}

double to_x(const DomainMap& map, double S) {
    if (S < 0.0) throw DomainError("to_x: negative price");
    if (map.kind == MapKind::truncated) return S;
    return 2.0 / std::numbers::pi * std::atan(S / map.L);
}

double from_x(const DomainMap& map, double x) {
    if (map.kind == MapKind::truncated) return x;
    if (x >= 1.0) throw DomainError("from_x: x >= 1 is the point at infinity");
    if (x < 0.0) throw DomainError("from_x: negative x");
    return map.L * std::tan(0.5 * std::numbers::pi * x);
}

MapJacobians jacobians(const DomainMap& map, double x) {
    if (map.kind == MapKind::truncated) return {1.0, 0.0};
    if (x >= 1.0) throw DomainError("jacobians: x >= 1 is the point at infinity");
    const double half = 0.5 * std::numbers::pi * x;
    const double c = std::cos(half);
    const double s = std::sin(half);
    return {map.L * std::numbers::pi / (2.0 * c * c), -2.0 * c * s / map.L};
}

NetEval transform_derivatives(const NetEval& eval, const MapJacobians& jac) {
    return {eval.value, eval.d1 / jac.upsilon,
            eval.d2 / (jac.upsilon * jac.upsilon) + jac.theta * eval.d1 / jac.upsilon};
}

double solver_lo(const DomainMap& map, double domain_lo) { return to_x(map, domain_lo); }

double solver_hi(const DomainMap& map, double domain_hi) {
    if (map.kind == MapKind::arctan) return 1.0;
    return std::isfinite(domain_hi) ? std::min(domain_hi, map.s_max) : map.s_max;
}

} // namespace bsnet
