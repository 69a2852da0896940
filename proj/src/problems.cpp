#include "bsnet/problems.hpp"

#include <array>
#include <cmath>

#include "bsnet/errors.hpp"
#include "bsnet/expression.hpp"
#include "bsnet/special_fn.hpp"

namespace bsnet {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0)) throw ContractViolation(std::string(what) + " must be positive");
}

// Black-Scholes operator in time-to-maturity: U_tau = s^2 S^2/2 U_SS + r S U_S - r U.
SpatialOperator black_scholes_operator(double r, double sigma) {
    SpatialOperator op;
    op.gamma1 = [sigma](double S, double) { return 0.5 * sigma * sigma * S * S; };
    op.gamma2 = [r](double S, double) { return r * S; };
    op.gamma3 = [r](double, double) { return -r; };
    op.forcing = [](double, double) { return 0.0; };
    return op;
}

struct D12 {
    double d1, d2;
};

D12 bs_d(double S, double tau, double r, double sigma, double K) {
    const double vol = sigma * std::sqrt(tau);
    const double d1 = (std::log(S / K) + (r + 0.5 * sigma * sigma) * tau) / vol;
    return {d1, d1 - vol};
}

} // namespace

double bs_call_price(double S, double t, double r, double sigma, double K, double T) {
    const double tau = T - t;
    if (tau <= 0.0) return std::max(S - K, 0.0);
    if (S <= 0.0) return 0.0;
    const D12 d = bs_d(S, tau, r, sigma, K);
    return S * special::normal_cdf(d.d1) - K * std::exp(-r * tau) * special::normal_cdf(d.d2);
}

double bs_put_price(double S, double t, double r, double sigma, double K, double T) {
    const double tau = T - t;
    if (tau <= 0.0) return std::max(K - S, 0.0);
    if (S <= 0.0) return K * std::exp(-r * tau);
    const D12 d = bs_d(S, tau, r, sigma, K);
    return -S * special::normal_cdf(-d.d1) + K * std::exp(-r * tau) * special::normal_cdf(-d.d2);
}

ProblemSpec european_call(double r, double sigma, double K, double T) {
    require_positive(r, "european_call: r");
    require_positive(sigma, "european_call: sigma");
    require_positive(K, "european_call: K");
    require_positive(T, "european_call: T");
    ProblemSpec p;
    p.name = "european_call";
    p.r = r;
    p.sigma = sigma;
    p.K = K;
    p.T = T;
    p.op = black_scholes_operator(r, sigma);
    p.data_kind = DataKind::terminal_payoff;
    p.data = [K](double S) { return S > K ? Jet2{S - K, 1.0, 0.0} : Jet2{0.0}; };
    p.left_bc = [](double, double) { return 0.0; };
    p.right_bc = [r, K](double S, double tau) { return S - K * std::exp(-r * tau); };
    p.exact = [=](double S, double tau) { return bs_call_price(S, T - tau, r, sigma, K, T); };
    return p;
}

ProblemSpec european_put(double r, double sigma, double K, double T) {
    require_positive(r, "european_put: r");
    require_positive(sigma, "european_put: sigma");
    require_positive(K, "european_put: K");
    require_positive(T, "european_put: T");
    ProblemSpec p;
    p.name = "european_put";
    p.r = r;
    p.sigma = sigma;
    p.K = K;
    p.T = T;
    p.op = black_scholes_operator(r, sigma);
    p.data_kind = DataKind::terminal_payoff;
    p.data = [K](double S) { return S < K ? Jet2{K - S, -1.0, 0.0} : Jet2{0.0}; };
    p.left_bc = [r, K](double, double tau) { return K * std::exp(-r * tau); };
    p.right_bc = [](double, double) { return 0.0; };
    p.exact = [=](double S, double tau) { return bs_put_price(S, T - tau, r, sigma, K, T); };
    return p;
}

double fractional_forcing(double S, double t, double alpha, double r, double sigma) {
    const double a = 0.5 * sigma * sigma;
    const double b = r - a;
    const double c = r;
    const double shape = S * S * (1.0 - S);
    const double time_part = 2.0 * std::pow(t, 2.0 - alpha) / special::gamma_fn(3.0 - alpha) +
                             2.0 * std::pow(t, 1.0 - alpha) / special::gamma_fn(2.0 - alpha);
    const double growth = (t + 1.0) * (t + 1.0);
    return time_part * shape -
           growth * (a * (2.0 - 6.0 * S) + b * (2.0 * S - 3.0 * S * S) - c * shape);
}

ProblemSpec fractional_manufactured(double alpha, double r, double sigma, double T) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("fractional_manufactured: alpha must lie in (0, 1)");
    require_positive(T, "fractional_manufactured: T");
    const double a = 0.5 * sigma * sigma;
    const double b = r - a;
    const double c = r;
    ProblemSpec p;
    p.name = "fractional";
    p.alpha = alpha;
    p.r = r;
    p.sigma = sigma;
    p.T = T;
    p.domain_lo = 0.0;
    p.domain_hi = 1.0;
    p.op.gamma1 = [a](double, double) { return a; };
    p.op.gamma2 = [b](double, double) { return b; };
    p.op.gamma3 = [c](double, double) { return -c; };
    p.op.forcing = [=](double S, double t) { return fractional_forcing(S, t, alpha, r, sigma); };
    p.data_kind = DataKind::initial_data;
    p.data = [](double S) {
        return Jet2{S * S * (1.0 - S), 2.0 * S - 3.0 * S * S, 2.0 - 6.0 * S};
    };
    p.left_bc = [](double, double) { return 0.0; };
    p.right_bc = [](double, double) { return 0.0; };
    p.exact = [](double S, double t) { return (t + 1.0) * (t + 1.0) * S * S * (1.0 - S); };
    return p;
}

ProblemSpec custom_problem(const CustomProblemSource& src) {
    if (!(src.alpha > 0.0 && src.alpha <= 1.0))
        throw DomainError("custom problem: alpha must lie in (0, 1]");
    require_positive(src.T, "custom problem: T");
    if (!(src.domain_lo < src.domain_hi))
        throw ContractViolation("custom problem: domain_lo must be below domain_hi");

    const std::vector<std::string> names{"S", "t", "r", "sigma", "K", "T", "alpha"};
    const std::array<double, 5> consts{src.r, src.sigma, src.K, src.T, src.alpha};
    auto compile = [&](const std::string& text) {
        auto e = Expression::parse(text, names);
        return [e, consts](double S, double t) {
            const std::array<double, 7> vars{S, t, consts[0], consts[1], consts[2], consts[3],
                                             consts[4]};
            return e.eval(vars);
        };
    };

    ProblemSpec p;
    p.name = src.name;
    p.alpha = src.alpha;
    p.r = src.r;
    p.sigma = src.sigma;
    p.K = src.K;
    p.T = src.T;
    p.domain_lo = src.domain_lo;
    p.domain_hi = src.domain_hi;
    p.op.gamma1 = compile(src.gamma1);
    p.op.gamma2 = compile(src.gamma2);
    p.op.gamma3 = compile(src.gamma3);
    p.op.forcing = compile(src.forcing);
    p.data_kind = src.data_kind;
    auto data = Expression::parse(src.data, names);
    p.data = [data, consts](double S) {
        const std::array<Jet2, 7> vars{Jet2::variable(S), Jet2{0.0}, Jet2{consts[0]},
                                       Jet2{consts[1]}, Jet2{consts[2]}, Jet2{consts[3]},
                                       Jet2{consts[4]}};
        return data.eval(vars);
    };
    p.left_bc = compile(src.left_bc);
    p.right_bc = compile(src.right_bc);
    if (!src.exact.empty()) p.exact = compile(src.exact);
    return p;
}

CollocationSet collocation_points(double lo, double hi, std::size_t r) {
    if (r < 2) throw ContractViolation("collocation_points: need at least 2 points");
    if (!(lo < hi)) throw ContractViolation("collocation_points: lo must be below hi");
    CollocationSet c;
    c.points.resize(r);
    const double h = (hi - lo) / static_cast<double>(r - 1);
    for (std::size_t i = 0; i < r; ++i) c.points[i] = lo + static_cast<double>(i) * h;
    c.points.back() = hi;
    return c;
}

} // namespace bsnet
