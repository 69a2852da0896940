#pragma once

#include <span>
#include <vector>

#include "bsnet/network.hpp"
#include "bsnet/trainer.hpp"

namespace bsnet::kernels {

/// Reusable buffers for the fused kernels (one gradient row per collocation row).
class Workspace {
public:
    std::span<double> rows(std::size_t count, std::size_t width);

private:
    std::vector<double> buffer_;
};

/// Reference path: network::forward and network::param_grads per row, accumulated
/// serially. Slow but built only from the public network operations.
CostBreakdown cost_and_gradient_reference(const StepSystem& system, const NetworkParams& params,
                                          std::span<double> grad);

/// Fused single-pass kernel. Per-row contributions are computed independently
/// (in parallel when threads != 1) and reduced in row order, so the result is
/// bit-identical for every thread count.
CostBreakdown cost_and_gradient_fused(const StepSystem& system, const NetworkParams& params,
                                      std::span<double> grad, Workspace& ws, int threads);

/// Dispatch on KernelKind; `serial` is the fused kernel on one thread.
CostBreakdown cost_and_gradient(const StepSystem& system, const NetworkParams& params,
                                std::span<double> grad, Workspace& ws, KernelKind kind,
                                int threads = 0);

/// Cost only, from forward() per row; agrees with the fused kernels to rounding.
CostBreakdown cost_only(const StepSystem& system, const NetworkParams& params);

} // namespace bsnet::kernels
