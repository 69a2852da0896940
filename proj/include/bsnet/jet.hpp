#pragma once

#include <cmath>

namespace bsnet {

/// Truncated second-order Taylor jet in one variable: value, first and second
/// derivative. Propagates exact derivatives through closed-form data functions.
struct Jet2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    constexpr Jet2() = default;
    constexpr Jet2(double value) : v(value) {}
    constexpr Jet2(double value, double first, double second) : v(value), d1(first), d2(second) {}

    static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
    // q = a/b, so a = q b and the product rule gives q' and q''.
    const double q = a.v / b.v;
    const double q1 = (a.d1 - q * b.d1) / b.v;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
    return {q, q1, q2};
}

/// Apply a scalar function given f(u), f'(u), f''(u) at u = a.v.
inline Jet2 compose(const Jet2& a, double f0, double f1, double f2) {
    return {f0, f1 * a.d1, f2 * a.d1 * a.d1 + f1 * a.d2};
}

inline Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.v);
    return compose(a, e, e, e);
}
inline Jet2 log(const Jet2& a) { return compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet2 sqrt(const Jet2& a) {
    const double s = std::sqrt(a.v);
    return compose(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet2 sin(const Jet2& a) { return compose(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet2 cos(const Jet2& a) { return compose(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet2 pow(const Jet2& a, double p) {
    if (p == 0.0) return Jet2{1.0};
    const double f0 = std::pow(a.v, p);
    const double f1 = p * std::pow(a.v, p - 1.0);
    const double f2 = p * (p - 1.0) * std::pow(a.v, p - 2.0);
    return compose(a, f0, f1, f2);
}
inline Jet2 pow(const Jet2& a, const Jet2& b) {
    if (b.d1 == 0.0 && b.d2 == 0.0) return pow(a, b.v);
    return exp(b * log(a));
}
// Piecewise functions pick the active branch; at a tie the left branch wins.
inline Jet2 max(const Jet2& a, const Jet2& b) { return a.v >= b.v ? a : b; }
inline Jet2 min(const Jet2& a, const Jet2& b) { return a.v <= b.v ? a : b; }
inline Jet2 abs(const Jet2& a) { return a.v >= 0.0 ? a : -a; }

} // namespace bsnet
