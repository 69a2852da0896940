#include "bsnet/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "bsnet/errors.hpp"
#include "bsnet/kernels.hpp"

namespace bsnet {

void TrainConfig::validate() const {
    auto open_unit = [](double value, const char* name) {
        if (!(value > 0.0 && value < 1.0))
            throw ContractViolation(std::string(name) + " must lie in (0, 1)");
    };
    open_unit(eta, "eta");
    open_unit(beta1, "beta1");
    open_unit(beta2, "beta2");
    open_unit(rho, "rho");
    if (!(epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
    if (epochs_first == 0) throw ContractViolation("epochs_first must be >= 1");
    if (epochs_rest == 0) throw ContractViolation("epochs_rest must be >= 1");
    if (!(init_scale > 0.0)) throw ContractViolation("init_scale must be positive");
    if (!(divergence_threshold > 0.0))
        throw ContractViolation("divergence_threshold must be positive");
}

namespace {

void check_step_shapes(const OptimizerState& state, std::span<double> params,
                       std::span<const double> grad) {
    if (params.size() != grad.size() || state.m.size() != params.size() ||
        state.v.size() != params.size())
        throw ContractViolation("optimizer step: parameter, gradient and state sizes differ");
}

} // namespace

void adam_step(OptimizerState& state, std::span<double> params, std::span<const double> grad,
               const TrainConfig& cfg) {
    check_step_shapes(state, params, grad);
    const double i1 = static_cast<double>(state.iteration + 1);
    const double c1 = 1.0 - std::pow(cfg.beta1, i1);
    const double c2 = 1.0 - std::pow(cfg.beta2, i1);
    for (std::size_t j = 0; j < params.size(); ++j) {
        const double g = grad[j];
        state.m[j] = (1.0 - cfg.beta1) * g + cfg.beta1 * state.m[j];
        state.v[j] = (1.0 - cfg.beta2) * (g * g) + cfg.beta2 * state.v[j];
        const double mhat = state.m[j] / c1;
        const double vhat = state.v[j] / c2;
        params[j] = params[j] - cfg.eta * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
    ++state.iteration;
}

void sgd_step(OptimizerState& state, std::span<double> params, std::span<const double> grad,
              const TrainConfig& cfg) {
    check_step_shapes(state, params, grad);
    for (std::size_t j = 0; j < params.size(); ++j) params[j] -= cfg.eta * grad[j];
    ++state.iteration;
}

void rmsprop_step(OptimizerState& state, std::span<double> params,
                  std::span<const double> grad, const TrainConfig& cfg) {
    check_step_shapes(state, params, grad);
    for (std::size_t j = 0; j < params.size(); ++j) {
        const double g = grad[j];
        state.v[j] = cfg.rho * state.v[j] + (1.0 - cfg.rho) * g * g;
        params[j] -= cfg.eta * g / (std::sqrt(state.v[j]) + cfg.epsilon);
    }
    ++state.iteration;
}

void optimizer_step(OptimizerState& state, std::span<double> params,
                    std::span<const double> grad, const TrainConfig& cfg) {
    switch (cfg.optimizer) {
    case OptimizerKind::adam: return adam_step(state, params, grad, cfg);
    case OptimizerKind::sgd: return sgd_step(state, params, grad, cfg);
    case OptimizerKind::rmsprop: return rmsprop_step(state, params, grad, cfg);
    }
    throw ContractViolation("unknown optimizer");
}

std::optional<std::size_t> StepContext::surrogate_index() const {
    if (map.kind == MapKind::arctan && !points.points.empty()) return points.r() - 1;
    return std::nullopt;
}

StepSystem assemble_step(const StepContext& ctx, const StepHistory& history,
                         std::size_t step_index) {
    const std::size_t r = ctx.points.r();
    if (history.points() != r)
        throw ContractViolation("assemble_step: history width differs from collocation count");
    if (history.rows() < step_index + 1)
        throw ContractViolation("assemble_step: history does not cover the step");
    if (step_index >= ctx.grid.N) throw ContractViolation("assemble_step: step past the grid");

    const ProblemSpec& pb = ctx.problem;
    const double t_new = ctx.grid.time(step_index + 1);
    const bool fractional = ctx.grid.alpha < 1.0;
    const double theta = ctx.theta;
    if (!fractional && theta < 1.0 && !history.has_rhs(step_index))
        throw ContractViolation("assemble_step: theta < 1 needs the operator on the previous row");

    CaputoSplit split;
    if (fractional) split = caputo_split(ctx.grid, history, step_index);
    const auto old_row = history.row(step_index);
    const auto surrogate = ctx.surrogate_index();

    StepSystem sys;
    sys.activation = ctx.activation;
    sys.rows.reserve(r);
    for (std::size_t i = 0; i < r; ++i) {
        if (surrogate && i == *surrogate) continue;
        const double y = ctx.points.points[i];
        const double S = from_x(ctx.map, y);
        const MapJacobians jac = jacobians(ctx.map, y);
        const double g1 = pb.op.gamma1(S, t_new);
        const double g2 = pb.op.gamma2(S, t_new);
        const double g3 = pb.op.gamma3(S, t_new);
        const double f = pb.op.forcing(S, t_new);
        // Operator on the network in solver coordinates: a_v u + a_1 u_y + a_2 u_yy + f.
        const double a_v = g3;
        const double a_1 = (g2 + g1 * jac.theta) / jac.upsilon;
        const double a_2 = g1 / (jac.upsilon * jac.upsilon);

        ResidualRow row;
        row.y = y;
        if (fractional) {
            row.c_value = split.kappa - a_v;
            row.c_d1 = -a_1;
            row.c_d2 = -a_2;
            row.target = split.known[i] + f;
        } else {
            const double dt = ctx.grid.dt;
            row.c_value = 1.0 / dt - theta * a_v;
            row.c_d1 = -theta * a_1;
            row.c_d2 = -theta * a_2;
            row.target = old_row[i] / dt + theta * f;
            if (theta < 1.0) row.target += (1.0 - theta) * history.rhs_row(step_index)[i];
        }
        sys.rows.push_back(row);
    }

    const double y_lo = ctx.points.points.front();
    const double y_hi = ctx.points.points.back();
    sys.left = {y_lo, pb.left_bc(from_x(ctx.map, y_lo), t_new), 1.0};
    const double right_target = pb.right_bc(from_x(ctx.map, y_hi), t_new);
    // Under the arctan map the right boundary sits at an enormous price; its
    // mismatch is measured relative to the boundary value.
    const double right_weight =
        ctx.map.kind == MapKind::arctan ? 1.0 / std::max(1.0, std::abs(right_target)) : 1.0;
    sys.right = {y_hi, right_target, right_weight};
    return sys;
}

CostBreakdown step_cost(const SpatialField& field, const StepContext& ctx,
                        const StepHistory& history, std::size_t step_index) {
    const std::size_t r = ctx.points.r();
    if (history.points() != r)
        throw ContractViolation("step_cost: history width differs from collocation count");
    const double t_new = ctx.grid.time(step_index + 1);
    std::vector<double> values(r), rhs(r);
    for (std::size_t i = 0; i < r; ++i) {
        const double y = ctx.points.points[i];
        const double S = from_x(ctx.map, y);
        const NetEval s_space = transform_derivatives(field(y), jacobians(ctx.map, y));
        values[i] = s_space.value;
        rhs[i] = ctx.problem.op.apply(S, t_new, s_space.value, s_space.d1, s_space.d2);
    }

    std::vector<double> residual;
    if (ctx.grid.alpha < 1.0) {
        residual = caputo_residual(ctx.grid, history, values, rhs, step_index);
    } else {
        if (history.rows() < step_index + 1)
            throw ContractViolation("step_cost: history does not cover the step");
        const auto old_row = history.row(step_index);
        std::vector<double> rhs_old(r, 0.0);
        if (ctx.theta < 1.0) {
            const auto h = history.rhs_row(step_index);
            rhs_old.assign(h.begin(), h.end());
        }
        residual = theta_residual(ctx.theta, ctx.grid.dt, old_row, values, rhs_old, rhs);
    }

    const auto surrogate = ctx.surrogate_index();
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < r; ++i) {
        if (surrogate && i == *surrogate) continue;
        sum_sq += residual[i] * residual[i];
        ++count;
    }

    CostBreakdown cost;
    cost.pde_term = sum_sq / (2.0 * static_cast<double>(count));
    const double S_lo = ctx.point_S(0);
    const double S_hi = ctx.point_S(r - 1);
    const double e_left = values.front() - ctx.problem.left_bc(S_lo, t_new);
    const double right_target = ctx.problem.right_bc(S_hi, t_new);
    double e_right = values.back() - right_target;
    if (ctx.map.kind == MapKind::arctan) e_right /= std::max(1.0, std::abs(right_target));
    cost.left_bc_term = e_left * e_left;
    cost.right_bc_term = e_right * e_right;
    cost.total = cost.pde_term + cost.left_bc_term + cost.right_bc_term;
    return cost;
}

CostBreakdown step_cost(const NetworkParams& params, const StepContext& ctx,
                        const StepHistory& history, std::size_t step_index) {
    const OutputActivation act = ctx.activation;
    return step_cost([&](double y) { return forward(params, y, act); }, ctx, history,
                     step_index);
}

ParamGradient cost_gradient(const NetworkParams& params, const StepContext& ctx,
                            const StepHistory& history, std::size_t step_index,
                            KernelKind kernel) {
    const StepSystem sys = assemble_step(ctx, history, step_index);
    ParamGradient grad(params.n_hidden());
    kernels::Workspace ws;
    kernels::cost_and_gradient(sys, params, grad.flat(), ws, kernel);
    return grad;
}

TrainOutcome run_optimizer(const NetworkParams& initial, const StepSystem& system,
                           const TrainConfig& cfg, std::size_t epochs) {
    cfg.validate();
    TrainOutcome out{initial, {}, std::nullopt, 0.0};
    out.trace.reserve(epochs);
    OptimizerState state(initial.size());
    std::vector<double> grad(initial.size());
    kernels::Workspace ws;

    const auto start = std::chrono::steady_clock::now();
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        const CostBreakdown cost =
            kernels::cost_and_gradient(system, out.params, grad, ws, cfg.kernel, cfg.threads);
        out.trace.push_back(cost);
        if (!std::isfinite(cost.total) || cost.total > cfg.divergence_threshold) {
            out.diverged_epoch = epoch;
            break;
        }
        optimizer_step(state, out.params.flat(), grad, cfg);
    }
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

TrainOutcome train_step_network(const NetworkParams& initial, const StepContext& ctx,
                                const StepHistory& history, std::size_t step_index,
                                const TrainConfig& cfg) {
    const StepSystem sys = assemble_step(ctx, history, step_index);
    const std::size_t epochs = step_index == 0 ? cfg.epochs_first : cfg.epochs_rest;
    TrainOutcome out = run_optimizer(initial, sys, cfg, epochs);
    if (out.diverged_epoch) throw TrainingDiverged(*out.diverged_epoch, out.trace.back().total);
    return out;
}

LrSearchReport lr_grid_search(const StepContext& ctx, const StepHistory& history,
                              std::size_t n_hidden, const TrainConfig& cfg,
                              std::span<const double> candidates, std::size_t probe_epochs) {
    if (candidates.empty()) throw ContractViolation("lr_grid_search: no candidates");
    if (probe_epochs == 0) throw ContractViolation("lr_grid_search: probe_epochs must be >= 1");
    for (double eta : candidates)
        if (!(eta > 0.0 && eta < 1.0))
            throw ContractViolation("lr_grid_search: candidates must lie in (0, 1)");

    const StepSystem sys = assemble_step(ctx, history, 0);
    const NetworkParams init = init_params(n_hidden, cfg.seed, cfg.init_scale);
    LrSearchReport report;
    const LrCandidateResult* best = nullptr;
    for (double eta : candidates) {
        TrainConfig probe = cfg;
        probe.eta = eta;
        const TrainOutcome run = run_optimizer(init, sys, probe, probe_epochs);
        LrCandidateResult res{eta, run.trace.back().total, run.diverged_epoch};
        if (res.diverged_epoch) res.final_cost = std::numeric_limits<double>::infinity();
        report.candidates.push_back(res);
    }
    for (const auto& c : report.candidates) {
        if (c.diverged_epoch) continue;
        if (!best || c.final_cost < best->final_cost ||
            (c.final_cost == best->final_cost && c.eta < best->eta))
            best = &c;
    }
    if (!best) {
        std::ostringstream msg;
        msg << "learning-rate search failed: every candidate diverged (";
        for (std::size_t i = 0; i < report.candidates.size(); ++i)
            msg << (i ? ", " : "") << "eta=" << report.candidates[i].eta << " at epoch "
                << *report.candidates[i].diverged_epoch;
        msg << ")";
        throw SearchFailed(msg.str(), report);
    }
    report.best_eta = best->eta;
    return report;
}

} // namespace bsnet
