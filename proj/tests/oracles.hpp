#pragma once
// Independent reference computations shared by the unit tests and the
// acceptance binary. Nothing here calls the code under test except where a
// function says it compares against it.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bsnet/network.hpp"
#include "bsnet/problems.hpp"
#include "bsnet/stepper.hpp"

namespace oracle {

/// Standard normal CDF by composite Simpson quadrature of the density.
inline double simpson_cdf(double x, int panels = 20000) {
    const double h = x / panels;
    auto pdf = [](double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); };
    double sum = pdf(0.0) + pdf(x);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * pdf(i * h);
    return 0.5 + sum * h / 3.0;
}

inline double call_price(double S, double t, double r, double sigma, double K, double T) {
    const double tau = T - t;
    const double d1 = (std::log(S / K) + (r + 0.5 * sigma * sigma) * tau) / (sigma * std::sqrt(tau));
    const double d2 = d1 - sigma * std::sqrt(tau);
    return S * simpson_cdf(d1) - K * std::exp(-r * tau) * simpson_cdf(d2);
}

/// 30-digit evaluation of call_price(10, 0, 0.05, 0.2, 10, 1), frozen.
inline constexpr double kCallAtTheMoney = 1.0450583572185567;

/// Result of the randomized finite-difference derivative suite.
struct FdReport {
    int trials = 0;
    int comparisons = 0;
    int failures = 0;
    std::string first_failure;
};

namespace detail {

inline bool close(double exact, double fd, double rel_tol, double floor) {
    if (std::abs(exact) <= floor && std::abs(fd) <= floor) return true;
    return std::abs(exact - fd) <= rel_tol * std::abs(exact);
}

} // namespace detail

/// Five-point central stencils (step 1e-3) throughout: input derivatives
/// (d1 from value, d2 from d1) to relative 1e-6 and parameter gradients of
/// value, d1 and d2 to relative 1e-4. Two-point differences at steps of
/// 1e-5 or 1e-6 carry ~1e-10 of roundoff, which swamps entries near the
/// floor. Comparisons are skipped below the floor.
inline FdReport network_fd_suite(int trials, std::uint64_t seed) {
    using namespace bsnet;
    FdReport rep;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0), coef(-2.0, 2.0);
    const std::size_t sizes[] = {1, 6, 20};
    auto fail = [&](const std::string& what) {
        ++rep.failures;
        if (rep.first_failure.empty()) rep.first_failure = what;
    };
    for (int trial = 0; trial < trials; ++trial) {
        ++rep.trials;
        const std::size_t n = sizes[trial % 3];
        const OutputActivation act = (trial / 3) % 2 ? OutputActivation::sigmoid : OutputActivation::identity;
        std::vector<double> flat(param_count(n));
        for (double& v : flat) v = coef(gen);
        const NetworkParams p(n, flat);
        const double x = unit(gen);
        const std::string tag = "trial " + std::to_string(trial);

        const double hx = 1e-3;
        const NetEval e = forward(p, x, act);
        const NetEval a2 = forward(p, x + 2 * hx, act), a1 = forward(p, x + hx, act);
        const NetEval b1 = forward(p, x - hx, act), b2 = forward(p, x - 2 * hx, act);
        const double fd1 = (-a2.value + 8 * a1.value - 8 * b1.value + b2.value) / (12 * hx);
        const double fd2 = (-a2.d1 + 8 * a1.d1 - 8 * b1.d1 + b2.d1) / (12 * hx);
        rep.comparisons += 2;
        if (!detail::close(e.d1, fd1, 1e-6, 1e-10)) fail(tag + ": d1");
        if (!detail::close(e.d2, fd2, 1e-6, 1e-10)) fail(tag + ": d2");

        const EvalGradients g = param_grads(p, x, act);
        const double hp = 1e-3;
        for (std::size_t j = 0; j < p.size(); ++j) {
            auto at = [&](double offset) {
                NetworkParams q = p;
                q.flat()[j] += offset;
                return forward(q, x, act);
            };
            const NetEval a2 = at(2 * hp), a1 = at(hp), b1 = at(-hp), b2 = at(-2 * hp);
            auto stencil = [&](double NetEval::*field) {
                return (-(a2.*field) + 8 * (a1.*field) - 8 * (b1.*field) + (b2.*field)) / (12 * hp);
            };
            rep.comparisons += 3;
            if (!detail::close(g.value.flat()[j], stencil(&NetEval::value), 1e-4, 1e-8)) fail(tag + ": dvalue/dp" + std::to_string(j));
            if (!detail::close(g.d1.flat()[j], stencil(&NetEval::d1), 1e-4, 1e-8)) fail(tag + ": dd1/dp" + std::to_string(j));
            if (!detail::close(g.d2.flat()[j], stencil(&NetEval::d2), 1e-4, 1e-8)) fail(tag + ": dd2/dp" + std::to_string(j));
        }
    }
    return rep;
}

/// Adam written out line by line from the reference pseudocode:
///   m = (1 - b1) * g + b1 * m
///   v = (1 - b2) * g**2 + b2 * v
///   mhat = m / (1 - b1**(i+1)); vhat = v / (1 - b2**(i+1))
///   w = w - eta * mhat / (sqrt(vhat) + eps)
/// Returns the parameter vector after every step.
inline std::vector<std::vector<double>> adam_trace(std::vector<double> w,
                                                   const std::vector<std::vector<double>>& grads,
                                                   double eta, double b1 = 0.9, double b2 = 0.999,
                                                   double eps = 1e-8) {
    std::vector<double> m(w.size(), 0.0), v(w.size(), 0.0);
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < grads.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double g = grads[i][j];
            m[j] = (1 - b1) * g + b1 * m[j];
            v[j] = (1 - b2) * std::pow(g, 2) + b2 * v[j];
            const double mhat = m[j] / (1 - std::pow(b1, static_cast<double>(i + 1)));
            const double vhat = v[j] / (1 - std::pow(b2, static_cast<double>(i + 1)));
            w[j] = w[j] - eta * mhat / (std::sqrt(vhat) + eps);
        }
        out.push_back(w);
    }
    return out;
}

/// Synthetic gradient sequence with sign changes, mixed magnitudes and a zero.
inline std::vector<std::vector<double>> synthetic_gradients() {
    std::vector<std::vector<double>> g;
    for (int i = 0; i < 10; ++i)
        g.push_back({std::sin(1.0 + i) * 3.0, 1e-3 * (i - 4.5), (i % 3 == 0) ? 0.0 : -0.5 / (i + 1),
                     std::exp(-static_cast<double>(i))});
    return g;
}

/// Max |L1 residual| over the collocation set of the Example 2 exact solution
/// at the final step, with the spatial operator applied analytically.
inline double l1_exact_residual(double alpha, std::size_t N, std::size_t r = 60) {
    using namespace bsnet;
    const ProblemSpec p = fractional_manufactured(alpha);
    const TimeGrid g = make_time_grid(1.0, N, alpha);
    const auto pts = collocation_points(0.0, 1.0, r).points;
    auto U = [](double S, double t) { return (t + 1) * (t + 1) * S * S * (1 - S); };
    std::vector<double> row;
    for (double S : pts) row.push_back(U(S, 0.0));
    StepHistory h(row);
    for (std::size_t k = 1; k < N; ++k) {
        row.clear();
        for (double S : pts) row.push_back(U(S, g.time(k)));
        h.push(row);
    }
    const double t = g.time(N);
    std::vector<double> nv, rhs;
    for (double S : pts) {
        const double c = (t + 1) * (t + 1);
        nv.push_back(U(S, t));
        rhs.push_back(p.op.apply(S, t, U(S, t), c * (2 * S - 3 * S * S), c * (2 - 6 * S)));
    }
    double worst = 0.0;
    for (double v : caputo_residual(g, h, nv, rhs, N - 1)) worst = std::max(worst, std::abs(v));
    return worst;
}

} // namespace oracle
