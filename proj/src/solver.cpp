#include "bsnet/solver.hpp"

#include <cmath>
#include <limits>

#include "bsnet/errors.hpp"

namespace bsnet {

const char* to_string(OptimizerKind kind) {
    switch (kind) {
    case OptimizerKind::adam: return "adam";
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::rmsprop: return "rmsprop";
    }
    return "?";
}

SolveDiverged::SolveDiverged(std::size_t step, std::size_t epoch, double cost,
                             SolveResult partial, std::vector<CostBreakdown> failed_trace)
    : std::runtime_error("training diverged at step " + std::to_string(step) + ", epoch " +
                         std::to_string(epoch) + " (cost " + std::to_string(cost) + ")"),
      step_(step), epoch_(epoch), partial_(std::move(partial)),
      failed_trace_(std::move(failed_trace)) {}

std::vector<double> SolveResult::evaluate(std::span<const double> S) const {
    if (params_per_step.empty()) throw NotApplicable("evaluate: no completed time step");
    const NetworkParams& p = params_per_step.back();
    std::vector<double> out;
    out.reserve(S.size());
    for (double s : S) out.push_back(forward(p, to_x(map, s), activation).value);
    return out;
}

CollocationSet training_points(const ProblemSpec& problem, const DomainMap& map,
                               std::size_t r) {
    if (map.kind == MapKind::arctan) {
        if (!problem.semi_infinite())
            throw ContractViolation("arctan mapping needs a semi-infinite problem domain");
        CollocationSet c = collocation_points(to_x(map, problem.domain_lo), 1.0, r);
        c.points.back() = map.right_eval_point;
        return c;
    }
    const double hi = problem.semi_infinite() ? map.s_max : problem.domain_hi;
    return collocation_points(problem.domain_lo, hi, r);
}

StepContext make_context(const ProblemSpec& problem, const SolverSetup& setup) {
    if (!(setup.theta >= 0.0 && setup.theta <= 1.0))
        throw ContractViolation("theta must lie in [0, 1]");
    StepContext ctx;
    ctx.problem = problem;
    ctx.map = setup.map;
    ctx.grid = make_time_grid(problem.T, setup.steps, problem.alpha);
    ctx.points = training_points(problem, setup.map, setup.collocation);
    ctx.theta = setup.theta;
    ctx.activation = setup.activation;
    return ctx;
}

namespace {

bool needs_rhs_rows(const StepContext& ctx) { return ctx.grid.alpha == 1.0 && ctx.theta < 1.0; }

std::vector<double> operator_on_data(const StepContext& ctx) {
    std::vector<double> rhs;
    for (std::size_t i = 0; i < ctx.points.r(); ++i) {
        const double S = ctx.point_S(i);
        const Jet2 g = ctx.problem.data(S);
        rhs.push_back(ctx.problem.op.apply(S, 0.0, g.v, g.d1, g.d2));
    }
    return rhs;
}

std::vector<double> operator_on_network(const StepContext& ctx, const NetworkParams& p,
                                        double t) {
    std::vector<double> rhs;
    for (std::size_t i = 0; i < ctx.points.r(); ++i) {
        const double y = ctx.points.points[i];
        const NetEval e =
            transform_derivatives(forward(p, y, ctx.activation), jacobians(ctx.map, y));
        rhs.push_back(ctx.problem.op.apply(ctx.point_S(i), t, e.value, e.d1, e.d2));
    }
    return rhs;
}

} // namespace

SolveResult solve(const ProblemSpec& problem, const SolverSetup& setup, const TrainConfig& cfg) {
    cfg.validate();
    const StepContext ctx = make_context(problem, setup);
    const std::size_t r = ctx.points.r();

    SolveResult result;
    result.map = setup.map;
    result.activation = setup.activation;
    result.solver_points = ctx.points.points;
    result.surrogate_index = ctx.surrogate_index();
    for (std::size_t i = 0; i < r; ++i) result.abscissae.push_back(ctx.point_S(i));
    for (std::size_t k = 0; k <= ctx.grid.N; ++k) {
        result.march_times.push_back(ctx.grid.time(k));
        result.calendar_times.push_back(problem.calendar_time(ctx.grid.time(k)));
    }

    std::vector<double> row0(r);
    for (std::size_t i = 0; i < r; ++i) row0[i] = problem.data(result.abscissae[i]).v;
    result.surface.push_back(row0);
    StepHistory history(std::move(row0));
    if (needs_rhs_rows(ctx)) history.set_rhs(0, operator_on_data(ctx));

    NetworkParams params = setup.initial ? *setup.initial
                                         : init_params(setup.n_hidden, cfg.seed, cfg.init_scale);
    if (params.n_hidden() != setup.n_hidden)
        throw ContractViolation("initial parameters do not match n_hidden");

    for (std::size_t k = 0; k < ctx.grid.N; ++k) {
        const StepSystem sys = assemble_step(ctx, history, k);
        TrainOutcome out = run_optimizer(params, sys, cfg, k == 0 ? cfg.epochs_first : cfg.epochs_rest);
        if (out.diverged_epoch) {
            const double cost = out.trace.back().total;
            throw SolveDiverged(k + 1, *out.diverged_epoch, cost, std::move(result),
                                std::move(out.trace));
        }
        std::vector<double> values(r);
        for (std::size_t i = 0; i < r; ++i)
            values[i] = forward(out.params, ctx.points.points[i], ctx.activation).value;
        result.surface.push_back(values);
        history.push(std::move(values));
        if (needs_rhs_rows(ctx))
            history.set_rhs(k + 1, operator_on_network(ctx, out.params, ctx.grid.time(k + 1)));

        result.params_per_step.push_back(out.params);
        result.cost_traces.push_back(std::move(out.trace));
        result.wall_times.push_back(out.seconds);
        params = std::move(out.params);
    }
    return result;
}

namespace {

ErrorSummary summarize(std::vector<double> S, const std::vector<double>& approx,
                       const ProblemSpec::TimeFn& exact, double s_final) {
    ErrorSummary out;
    double sum = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        const double err = std::abs(exact(S[i], s_final) - approx[i]);
        out.abs_err.push_back(err);
        out.log10_abs_err.push_back(err > 0.0 ? std::log10(err)
                                              : -std::numeric_limits<double>::infinity());
        out.max_abs = std::max(out.max_abs, err);
        sum += err;
    }
    out.mean_abs = S.empty() ? 0.0 : sum / static_cast<double>(S.size());
    out.S = std::move(S);
    return out;
}

} // namespace

ErrorSummary error_metrics(const SolveResult& result, const ProblemSpec& problem,
                           bool include_surrogate) {
    if (!problem.exact) throw NotApplicable("error_metrics: problem has no exact solution");
    if (result.surface.empty()) throw NotApplicable("error_metrics: empty result");
    std::vector<double> S, approx;
    const auto& last = result.surface.back();
    for (std::size_t i = 0; i < result.abscissae.size(); ++i) {
        if (!include_surrogate && result.surrogate_index && i == *result.surrogate_index)
            continue;
        S.push_back(result.abscissae[i]);
        approx.push_back(last[i]);
    }
    const double s_final = result.march_times.at(result.surface.size() - 1);
    return summarize(std::move(S), approx, *problem.exact, s_final);
}

ErrorSummary error_metrics_at(const SolveResult& result, const ProblemSpec& problem,
                              std::span<const double> S) {
    if (!problem.exact) throw NotApplicable("error_metrics_at: problem has no exact solution");
    const std::vector<double> approx = result.evaluate(S);
    const double s_final = result.march_times.at(result.surface.size() - 1);
    return summarize(std::vector<double>(S.begin(), S.end()), approx, *problem.exact, s_final);
}

std::vector<OptimizerTrace> compare_optimizers(const ProblemSpec& problem,
                                               const SolverSetup& setup,
                                               const TrainConfig& base_cfg) {
    const StepContext ctx = make_context(problem, setup);
    std::vector<double> row0;
    for (std::size_t i = 0; i < ctx.points.r(); ++i) row0.push_back(problem.data(ctx.point_S(i)).v);
    StepHistory history(row0);
    if (needs_rhs_rows(ctx)) history.set_rhs(0, operator_on_data(ctx));
    const StepSystem sys = assemble_step(ctx, history, 0);
    const NetworkParams init =
        setup.initial ? *setup.initial
                      : init_params(setup.n_hidden, base_cfg.seed, base_cfg.init_scale);

    std::vector<OptimizerTrace> out;
    for (OptimizerKind kind : {OptimizerKind::adam, OptimizerKind::sgd, OptimizerKind::rmsprop}) {
        TrainConfig cfg = base_cfg;
        cfg.optimizer = kind;
        TrainOutcome run = run_optimizer(init, sys, cfg, cfg.epochs_first);
        OptimizerTrace t;
        t.optimizer = kind;
        t.seconds_per_epoch = run.seconds / static_cast<double>(run.trace.size());
        t.diverged_epoch = run.diverged_epoch;
        t.trace = std::move(run.trace);
        out.push_back(std::move(t));
    }
    return out;
}

SweepReport sweep_alpha(const std::function<ProblemSpec(double alpha)>& family,
                        std::span<const double> alphas, const SolverSetup& setup,
                        const TrainConfig& cfg) {
    if (alphas.empty()) throw ContractViolation("sweep_alpha: no alpha values");
    SweepReport report;
    for (double alpha : alphas) {
        const ProblemSpec problem = family(alpha);
        if (report.S.empty()) {
            const StepContext ctx = make_context(problem, setup);
            for (std::size_t i = 0; i < ctx.points.r(); ++i) report.S.push_back(ctx.point_S(i));
        }
        SweepColumn col;
        col.alpha = alpha;
        try {
            const SolveResult res = solve(problem, setup, cfg);
            col.values = res.surface.back();
            if (problem.exact) col.max_abs_err = error_metrics(res, problem).max_abs;
        } catch (const SolveDiverged& e) {
            col.values.assign(report.S.size(), std::numeric_limits<double>::quiet_NaN());
            col.diverged_step = e.step();
        }
        report.columns.push_back(std::move(col));
    }
    return report;
}

} // namespace bsnet
