#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsnet/mapping.hpp"
#include "bsnet/network.hpp"
#include "bsnet/problems.hpp"
#include "bsnet/trainer.hpp"

namespace bsnet {

struct SolverSetup {
    DomainMap map;
    std::size_t steps = 20;         // N
    std::size_t collocation = 150;  // r
    std::size_t n_hidden = 20;
    double theta = 1.0;
    OutputActivation activation = OutputActivation::identity;
    std::optional<NetworkParams> initial;  // fine-tuning restart; default init_params
};

struct SolveResult {
    DomainMap map;
    OutputActivation activation = OutputActivation::identity;
    std::vector<double> solver_points;  // y_i
    std::vector<double> abscissae;      // S_i
    std::optional<std::size_t> surrogate_index;
    std::vector<double> march_times;    // s_k, k = 0..N
    std::vector<double> calendar_times; // t_k
    std::vector<std::vector<double>> surface;  // (N+1) x r
    std::vector<NetworkParams> params_per_step;
    std::vector<std::vector<CostBreakdown>> cost_traces;
    std::vector<double> wall_times;  // seconds per step

    std::size_t completed_steps() const { return params_per_step.size(); }
    /// Network of the last completed step evaluated at arbitrary prices.
    std::vector<double> evaluate(std::span<const double> S) const;
};

class SolveDiverged : public std::runtime_error {
public:
    SolveDiverged(std::size_t step, std::size_t epoch, double cost, SolveResult partial,
                  std::vector<CostBreakdown> failed_trace = {});
    std::size_t step() const noexcept { return step_; }
    std::size_t epoch() const noexcept { return epoch_; }
    const SolveResult& partial() const noexcept { return partial_; }
    /// Cost trace of the failing step up to and including the divergent epoch.
    const std::vector<CostBreakdown>& failed_trace() const noexcept { return failed_trace_; }

private:
    std::size_t step_;
    std::size_t epoch_;
    SolveResult partial_;
    std::vector<CostBreakdown> failed_trace_;
};

/// Collocation set in solver coordinates for the problem/map pair.
CollocationSet training_points(const ProblemSpec& problem, const DomainMap& map,
                               std::size_t r);

StepContext make_context(const ProblemSpec& problem, const SolverSetup& setup);

/// Marches all N steps with warm starts. Throws SolveDiverged carrying the
/// partial result.
SolveResult solve(const ProblemSpec& problem, const SolverSetup& setup, const TrainConfig& cfg);

struct ErrorSummary {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    std::vector<double> S;
    std::vector<double> abs_err;
    std::vector<double> log10_abs_err;  // -inf where the error is exactly zero
};

/// Errors at the reporting time (last row of the surface).
ErrorSummary error_metrics(const SolveResult& result, const ProblemSpec& problem,
                           bool include_surrogate = false);

/// Errors of the final network at arbitrary prices.
ErrorSummary error_metrics_at(const SolveResult& result, const ProblemSpec& problem,
                              std::span<const double> S);

struct OptimizerTrace {
    OptimizerKind optimizer = OptimizerKind::adam;
    std::vector<CostBreakdown> trace;
    std::optional<std::size_t> diverged_epoch;
    double seconds_per_epoch = 0.0;
};

/// First time step under Adam, SGD and RMSprop from identical initial parameters.
std::vector<OptimizerTrace> compare_optimizers(const ProblemSpec& problem,
                                               const SolverSetup& setup,
                                               const TrainConfig& base_cfg);

struct SweepColumn {
    double alpha = 0.0;
    std::vector<double> values;  // reporting-time surface, NaN if diverged
    std::optional<std::size_t> diverged_step;
    std::optional<double> max_abs_err;
};
struct SweepReport {
    std::vector<double> S;
    std::vector<SweepColumn> columns;
};

SweepReport sweep_alpha(const std::function<ProblemSpec(double alpha)>& family,
                        std::span<const double> alphas, const SolverSetup& setup,
                        const TrainConfig& cfg);

const char* to_string(OptimizerKind kind);

} // namespace bsnet
