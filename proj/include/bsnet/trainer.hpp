#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bsnet/mapping.hpp"
#include "bsnet/network.hpp"
#include "bsnet/problems.hpp"
#include "bsnet/stepper.hpp"

namespace bsnet {

enum class OptimizerKind { adam, sgd, rmsprop };
enum class KernelKind { reference, serial, openmp };

struct TrainConfig {
    OptimizerKind optimizer = OptimizerKind::adam;
    double eta = 0.03;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double rho = 0.9;  // RMSprop decay
    std::size_t epochs_first = 5000;
    std::size_t epochs_rest = 1200;
    std::uint64_t seed = 3;
    double init_scale = 0.01;
    double divergence_threshold = 1e12;
    KernelKind kernel = KernelKind::openmp;
    int threads = 0;  // 0: OpenMP default

    /// Throws ContractViolation naming the offending field.
    void validate() const;
};

struct OptimizerState {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t iteration = 0;

    explicit OptimizerState(std::size_t size = 0) : m(size, 0.0), v(size, 0.0) {}
};

// In-place optimizer updates on a flat parameter vector.
void adam_step(OptimizerState& state, std::span<double> params, std::span<const double> grad,
               const TrainConfig& cfg);
void sgd_step(OptimizerState& state, std::span<double> params, std::span<const double> grad,
              const TrainConfig& cfg);
void rmsprop_step(OptimizerState& state, std::span<double> params,
                  std::span<const double> grad, const TrainConfig& cfg);
void optimizer_step(OptimizerState& state, std::span<double> params,
                    std::span<const double> grad, const TrainConfig& cfg);

struct CostBreakdown {
    double pde_term = 0.0;
    double left_bc_term = 0.0;
    double right_bc_term = 0.0;
    double total = 0.0;
};

/// Everything that is fixed across the time steps of one solve.
struct StepContext {
    ProblemSpec problem;
    DomainMap map;
    TimeGrid grid;
    CollocationSet points;  // solver coordinates
    double theta = 1.0;
    OutputActivation activation = OutputActivation::identity;

    /// Index of the arctan right-boundary stand-in, which carries only the
    /// boundary penalty and no PDE residual.
    std::optional<std::size_t> surrogate_index() const;
    double point_S(std::size_t i) const { return from_x(map, points.points[i]); }
};

/// Per-step least-squares system. Each PDE row asks
///   c_value u + c_d1 u_y + c_d2 u_yy = target
/// for the network u in solver coordinates y; boundary rows ask
///   weight (u(y) - target) = 0.
struct ResidualRow {
    double y = 0.0;
    double c_value = 0.0;
    double c_d1 = 0.0;
    double c_d2 = 0.0;
    double target = 0.0;
};
struct BoundaryRow {
    double y = 0.0;
    double target = 0.0;
    double weight = 1.0;
};
struct StepSystem {
    std::vector<ResidualRow> rows;
    BoundaryRow left;
    BoundaryRow right;
    OutputActivation activation = OutputActivation::identity;
};

StepSystem assemble_step(const StepContext& ctx, const StepHistory& history,
                         std::size_t step_index);

/// Anything that can be evaluated like the network in solver coordinates.
using SpatialField = std::function<NetEval(double y)>;

/// Cost of one time step built directly from the stepper residuals.
CostBreakdown step_cost(const SpatialField& field, const StepContext& ctx,
                        const StepHistory& history, std::size_t step_index);
CostBreakdown step_cost(const NetworkParams& params, const StepContext& ctx,
                        const StepHistory& history, std::size_t step_index);

/// Exact gradient of step_cost().total.
ParamGradient cost_gradient(const NetworkParams& params, const StepContext& ctx,
                            const StepHistory& history, std::size_t step_index,
                            KernelKind kernel = KernelKind::openmp);

struct TrainOutcome {
    NetworkParams params;
    std::vector<CostBreakdown> trace;  // cost before each epoch's update
    std::optional<std::size_t> diverged_epoch;
    double seconds = 0.0;
};

/// Runs the configured optimizer for `epochs` full-batch epochs; records
/// divergence instead of throwing.
TrainOutcome run_optimizer(const NetworkParams& initial, const StepSystem& system,
                           const TrainConfig& cfg, std::size_t epochs);

/// One time step: epochs_first for step 0, epochs_rest afterwards.
/// Throws TrainingDiverged.
TrainOutcome train_step_network(const NetworkParams& initial, const StepContext& ctx,
                                const StepHistory& history, std::size_t step_index,
                                const TrainConfig& cfg);

struct LrCandidateResult {
    double eta = 0.0;
    double final_cost = 0.0;
    std::optional<std::size_t> diverged_epoch;
};
struct LrSearchReport {
    double best_eta = 0.0;
    std::vector<LrCandidateResult> candidates;
};

class SearchFailed : public std::runtime_error {
public:
    SearchFailed(const std::string& what, LrSearchReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const LrSearchReport& report() const noexcept { return report_; }

private:
    LrSearchReport report_;
};

/// Probe each learning rate on the first time step and keep the lowest final
/// cost; ties go to the smaller rate.
LrSearchReport lr_grid_search(const StepContext& ctx, const StepHistory& history,
                              std::size_t n_hidden, const TrainConfig& cfg,
                              std::span<const double> candidates, std::size_t probe_epochs);

} // namespace bsnet
