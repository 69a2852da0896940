#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bsnet/jet.hpp"
#include "bsnet/stepper.hpp"

namespace bsnet {

/// How the row-0 data relates to calendar time. Terminal payoffs are marched in
/// time-to-maturity tau = T - t, so every time argument below is the marching
/// time: tau for options, t itself for initial-value problems.
enum class DataKind { terminal_payoff, initial_data };

struct ProblemSpec {
    using TimeFn = std::function<double(double S, double t)>;

    std::string name;
    double alpha = 1.0;
    double r = 0.0;
    double sigma = 0.0;
    double K = 0.0;
    double T = 1.0;
    double domain_lo = 0.0;
    double domain_hi = std::numeric_limits<double>::infinity();

    SpatialOperator op;
    DataKind data_kind = DataKind::terminal_payoff;
    std::function<Jet2(double S)> data;  // g(S) with exact S-derivatives
    TimeFn left_bc;
    TimeFn right_bc;
    std::optional<TimeFn> exact;

    bool semi_infinite() const { return domain_hi == std::numeric_limits<double>::infinity(); }

    /// Calendar time corresponding to marching time s.
    double calendar_time(double s) const {
        return data_kind == DataKind::terminal_payoff ? T - s : s;
    }
};

/// Closed-form European prices at calendar time t (t < T; t == T gives the payoff).
double bs_call_price(double S, double t, double r, double sigma, double K, double T);
double bs_put_price(double S, double t, double r, double sigma, double K, double T);

ProblemSpec european_call(double r, double sigma, double K, double T);
ProblemSpec european_put(double r, double sigma, double K, double T);

/// Time-fractional problem on [0, 1] with exact solution (t+1)^2 S^2 (1-S).
ProblemSpec fractional_manufactured(double alpha, double r = 0.05, double sigma = 0.25,
                                    double T = 1.0);

/// Forcing term that makes (t+1)^2 S^2 (1-S) exact for the fractional problem.
double fractional_forcing(double S, double t, double alpha, double r, double sigma);

/// Expression sources for a problem defined at run time. Variables available in
/// every expression: S, t, r, sigma, K, T, alpha.
struct CustomProblemSource {
    std::string name = "custom";
    double alpha = 1.0;
    double r = 0.0;
    double sigma = 0.0;
    double K = 0.0;
    double T = 1.0;
    double domain_lo = 0.0;
    double domain_hi = 1.0;
    DataKind data_kind = DataKind::initial_data;
    std::string gamma1 = "0";
    std::string gamma2 = "0";
    std::string gamma3 = "0";
    std::string forcing = "0";
    std::string data = "0";
    std::string left_bc = "0";
    std::string right_bc = "0";
    std::string exact;  // empty: no exact solution
};

/// Parse every expression of `src` and build the problem. Throws ParseError.
ProblemSpec custom_problem(const CustomProblemSource& src);

struct CollocationSet {
    std::vector<double> points;
    std::size_t r() const { return points.size(); }
};

/// r equidistant points spanning [lo, hi] inclusive.
CollocationSet collocation_points(double lo, double hi, std::size_t r);

} // namespace bsnet
