#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bsnet/cli/commands.hpp"
#include "bsnet/kernels.hpp"
#include "bsnet/mapping.hpp"
#include "bsnet/network.hpp"
#include "bsnet/problems.hpp"
#include "bsnet/solver.hpp"
#include "bsnet/special_fn.hpp"
#include "bsnet/stepper.hpp"
#include "bsnet/trainer.hpp"

namespace bsnet::cli {

namespace {

struct Check {
    const char* name;
    std::function<bool(std::string& detail)> run;
};

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

bool network_derivatives(std::string& detail) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        NetworkParams p = init_params(5, 100 + trial, 1.0);
        const double x = u(gen), h = 1e-4;
        const NetEval e = forward(p, x);
        const double d1 = (forward(p, x + h).value - forward(p, x - h).value) / (2 * h);
        const double d2 = (forward(p, x + h).d1 - forward(p, x - h).d1) / (2 * h);
        if (rel_diff(d1, e.d1) > 1e-6 || rel_diff(d2, e.d2) > 1e-6) {
            detail = "input derivative mismatch at trial " + std::to_string(trial);
            return false;
        }
        const EvalGradients g = param_grads(p, x);
        for (std::size_t j = 0; j < p.size(); ++j) {
            NetworkParams hi = p, lo = p;
            hi.flat()[j] += h;
            lo.flat()[j] -= h;
            const NetEval a = forward(hi, x), b = forward(lo, x);
            if (rel_diff((a.d2 - b.d2) / (2 * h), g.d2.flat()[j]) > 1e-5) {
                detail = "d2 parameter gradient mismatch at trial " + std::to_string(trial);
                return false;
            }
        }
    }
    return true;
}

bool l1_collapse(std::string& detail) {
    const TimeGrid g1 = make_time_grid(1.0, 8, 1.0);
    TimeGrid ga = make_time_grid(1.0, 8, 1.0 - 1e-12);
    StepHistory h({0.3, -0.2, 1.1});
    h.push({0.4, 0.1, 0.9});
    const std::vector<double> nv{0.5, 0.0, 1.0}, rhs{0.1, 0.2, -0.3};
    const auto c = caputo_residual(ga, h, nv, rhs, 1);
    const auto t = theta_residual(1.0, g1.dt, h.row(1), nv, rhs, rhs);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (std::abs(c[i] - t[i]) > 1e-6) {
            detail = "caputo vs backward Euler differ by " + std::to_string(std::abs(c[i] - t[i]));
            return false;
        }
    return true;
}

bool closed_forms(std::string& detail) {
    const double c = bs_call_price(10.0, 0.0, 0.05, 0.2, 10.0, 1.0);
    if (std::abs(c - 1.0450583572185567) > 1e-6) {
        detail = "call price " + std::to_string(c);
        return false;
    }
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> S(0.5, 30.0), t(0.0, 0.95);
    for (int i = 0; i < 50; ++i) {
        const double s = S(gen), tt = t(gen);
        const double lhs = bs_call_price(s, tt, 0.05, 0.2, 10.0, 1.0) - bs_put_price(s, tt, 0.05, 0.2, 10.0, 1.0);
        const double rhs = s - 10.0 * std::exp(-0.05 * (1.0 - tt));
        if (std::abs(lhs - rhs) > 1e-9) {
            detail = "put-call parity off by " + std::to_string(std::abs(lhs - rhs));
            return false;
        }
    }
    return true;
}

bool map_round_trip(std::string& detail) {
    const DomainMap m = make_arctan_map(10.0, 0.6);
    for (double S : {0.0, 0.1, 1.0, 10.0, 37.5, 1e3, 1e5})
        if (std::abs(from_x(m, to_x(m, S)) - S) > 1e-9 * std::max(1.0, S)) {
            detail = "round trip failed at S=" + std::to_string(S);
            return false;
        }
    return true;
}

bool adam_first_step(std::string& detail) {
    TrainConfig cfg;
    cfg.beta1 = 0.37;
    OptimizerState st(1);
    std::vector<double> p{1.0}, g{0.25};
    adam_step(st, p, g, cfg);
    const double expected = 1.0 - cfg.eta * 0.25 / (0.25 + cfg.epsilon);
    if (std::abs(p[0] - expected) > 1e-14) {
        detail = "bias-corrected first update is wrong";
        return false;
    }
    return true;
}

bool kernels_agree(std::string& detail) {
    SolverSetup setup;
    setup.map = DomainMap::truncated(15.0);
    setup.collocation = 40;
    setup.n_hidden = 8;
    const ProblemSpec prob = european_call(0.05, 0.2, 10.0, 1.0);
    const StepContext ctx = make_context(prob, setup);
    std::vector<double> row0;
    for (std::size_t i = 0; i < ctx.points.r(); ++i) row0.push_back(prob.data(ctx.point_S(i)).v);
    const StepHistory h(row0);
    const StepSystem sys = assemble_step(ctx, h, 0);
    const NetworkParams p = init_params(8, 3, 0.5);
    std::vector<double> ga(p.size()), gb(p.size()), gc(p.size());
    kernels::Workspace ws;
    const auto a = kernels::cost_and_gradient_reference(sys, p, ga);
    const auto b = kernels::cost_and_gradient(sys, p, gb, ws, KernelKind::serial);
    const auto c = kernels::cost_and_gradient(sys, p, gc, ws, KernelKind::openmp, 4);
    if (b.total != c.total || gb != gc) {
        detail = "openmp kernel is not bit-identical to serial";
        return false;
    }
    if (rel_diff(a.total, b.total) > 1e-12) {
        detail = "fused cost differs from reference";
        return false;
    }
    for (std::size_t j = 0; j < ga.size(); ++j)
        if (rel_diff(ga[j], gb[j]) > 1e-10) {
            detail = "fused gradient differs from reference";
            return false;
        }
    const double direct = step_cost(p, ctx, h, 0).total;
    if (rel_diff(direct, a.total) > 1e-12) {
        detail = "assembled system cost differs from the stepper residual cost";
        return false;
    }
    return true;
}

bool scheme_order(std::string& detail) {
    const double alpha = 0.5;
    const ProblemSpec p = fractional_manufactured(alpha);
    const double S = 0.4;
    auto residual_at_T = [&](std::size_t N) {
        const TimeGrid g = make_time_grid(1.0, N, alpha);
        StepHistory h({(*p.exact)(S, 0.0)});
        for (std::size_t k = 1; k < N; ++k) h.push({(*p.exact)(S, g.time(k))});
        const double t = g.time(N);
        const double U = (*p.exact)(S, t);
        const double US = std::pow(t + 1, 2) * (2 * S - 3 * S * S);
        const double USS = std::pow(t + 1, 2) * (2 - 6 * S);
        const std::vector<double> nv{U}, rhs{p.op.apply(S, t, U, US, USS)};
        return std::abs(caputo_residual(g, h, nv, rhs, N - 1)[0]);
    };
    const double e1 = residual_at_T(16), e2 = residual_at_T(32);
    const double order = std::log2(e1 / e2);
    if (order < 2.0 - alpha - 0.3) {
        detail = "observed order " + std::to_string(order);
        return false;
    }
    return true;
}

} // namespace

int cmd_selftest(std::ostream& out) {
    const std::vector<Check> checks{
        {"sigmoid derivative identities", [](std::string& d) {
             const double x = 0.7, h = 1e-5;
             const double fd = (special::sigmoid(x + h) - special::sigmoid(x - h)) / (2 * h);
             if (std::abs(fd - special::sigmoid_deriv(x, 1)) > 1e-9) { d = "first derivative"; return false; }
             return true;
         }},
        {"gamma recurrence", [](std::string& d) {
             for (double z : {0.3, 1.5, 2.7})
                 if (rel_diff(special::gamma_fn(z + 1), z * special::gamma_fn(z)) > 1e-13) { d = "Gamma(z+1) != z Gamma(z)"; return false; }
             return true;
         }},
        {"network derivatives vs finite differences", network_derivatives},
        {"arctan map round trip", map_round_trip},
        {"L1 residual reduces to backward Euler at alpha=1", l1_collapse},
        {"L1 residual order on the manufactured solution", scheme_order},
        {"closed-form call price and put-call parity", closed_forms},
        {"Adam first step equals eta times sign", adam_first_step},
        {"kernels agree", kernels_agree},
    };
    int failures = 0;
    for (const auto& c : checks) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("threw: ") + e.what();
        }
        out << (ok ? "PASS " : "FAIL ") << c.name;
        if (!ok && !detail.empty()) out << ": " << detail;
        out << '\n';
        failures += ok ? 0 : 1;
    }
    out << (checks.size() - failures) << "/" << checks.size() << " checks passed\n";
    return failures ? exit_failure : exit_ok;
}

} // namespace bsnet::cli
