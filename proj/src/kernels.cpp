#include "bsnet/kernels.hpp"

#include <cmath>
#include <numeric>

#include "bsnet/errors.hpp"
#include "bsnet/special_fn.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace bsnet::kernels {

std::span<double> Workspace::rows(std::size_t count, std::size_t width) {
    if (buffer_.size() < count * width) buffer_.resize(count * width);
    return {buffer_.data(), count * width};
}

namespace {

void check_shapes(const StepSystem& system, const NetworkParams& params, std::span<double> grad) {
    if (grad.size() != params.size())
        throw ContractViolation("cost kernel: gradient buffer has wrong size");
    if (system.rows.empty()) throw ContractViolation("cost kernel: no residual rows");
}

// Boundary penalties (weight (u - target))^2; two points, shared by both kernels.
void add_boundaries(const StepSystem& system, const NetworkParams& params,
                    std::span<double> grad, CostBreakdown& cost) {
    auto one = [&](const BoundaryRow& row) {
        const NetEval ev = forward(params, row.y, system.activation);
        const double e = row.weight * (ev.value - row.target);
        const ParamGradient g = param_grad(params, row.y, EvalTarget::value, system.activation);
        const auto gf = g.flat();
        const double factor = 2.0 * e * row.weight;
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += factor * gf[j];
        return e * e;
    };
    cost.left_bc_term = one(system.left);
    cost.right_bc_term = one(system.right);
    cost.total = cost.pde_term + cost.left_bc_term + cost.right_bc_term;
}

} // namespace

CostBreakdown cost_and_gradient_reference(const StepSystem& system, const NetworkParams& params,
                                          std::span<double> grad) {
    check_shapes(system, params, grad);
    std::fill(grad.begin(), grad.end(), 0.0);
    const double inv_r = 1.0 / static_cast<double>(system.rows.size());
    double sum_sq = 0.0;
    for (const ResidualRow& row : system.rows) {
        const NetEval ev = forward(params, row.y, system.activation);
        const EvalGradients g = param_grads(params, row.y, system.activation);
        const double res =
            row.c_value * ev.value + row.c_d1 * ev.d1 + row.c_d2 * ev.d2 - row.target;
        sum_sq += res * res;
        const auto gv = g.value.flat();
        const auto g1 = g.d1.flat();
        const auto g2 = g.d2.flat();
        for (std::size_t j = 0; j < grad.size(); ++j)
            grad[j] += inv_r * res * (row.c_value * gv[j] + row.c_d1 * g1[j] + row.c_d2 * g2[j]);
    }
    CostBreakdown cost;
    cost.pde_term = 0.5 * inv_r * sum_sq;
    add_boundaries(system, params, grad, cost);
    return cost;
}

CostBreakdown cost_and_gradient_fused(const StepSystem& system, const NetworkParams& params,
                                      std::span<double> grad, Workspace& ws, int threads) {
    check_shapes(system, params, grad);
    const std::size_t n = params.n_hidden();
    const std::size_t P = params.size();
    const std::size_t R = system.rows.size();
    const double inv_r = 1.0 / static_cast<double>(R);
    const bool sigmoid_out = system.activation == OutputActivation::sigmoid;

    // Layout per row: P gradient entries, then the residual, then 4n hidden-unit scratch.
    const std::size_t stride = P + 1 + 4 * n;
    const std::span<double> buf = ws.rows(R, stride);
    const auto w = params.hidden_weights();
    const auto b = params.hidden_biases();
    const auto v = params.output_weights();
    const double beta = params.output_bias();

#if defined(_OPENMP)
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#else
    const int nt = 1;
    (void)threads;
#endif

#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(R); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const ResidualRow& row = system.rows[i];
        double* out = buf.data() + i * stride;
        double* s0 = out + P + 1;
        double* s1 = s0 + n;
        double* s2 = s1 + n;
        double* s3 = s2 + n;
        const double x = row.y;

        double z = beta, z1 = 0.0, z2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double s = special::sigmoid(w[k] * x + b[k]);
            s0[k] = s;
            s1[k] = special::sigmoid_d1_from(s);
            s2[k] = special::sigmoid_d2_from(s);
            s3[k] = special::sigmoid_d3_from(s);
            z += v[k] * s;
            z1 += v[k] * w[k] * s1[k];
            z2 += v[k] * w[k] * w[k] * s2[k];
        }

        double u = z, u1 = z1, u2 = z2;
        // dR/dp = A dz/dp + B dz1/dp + C dz2/dp after the output activation.
        double A = row.c_value, B = row.c_d1, C = row.c_d2;
        if (sigmoid_out) {
            const double p0 = special::sigmoid(z);
            const double p1 = special::sigmoid_d1_from(p0);
            const double p2 = special::sigmoid_d2_from(p0);
            const double p3 = special::sigmoid_d3_from(p0);
            u = p0;
            u1 = p1 * z1;
            u2 = p2 * z1 * z1 + p1 * z2;
            A = row.c_value * p1 + row.c_d1 * p2 * z1 + row.c_d2 * (p3 * z1 * z1 + p2 * z2);
            B = row.c_d1 * p1 + 2.0 * row.c_d2 * p2 * z1;
            C = row.c_d2 * p1;
        }
        const double res = row.c_value * u + row.c_d1 * u1 + row.c_d2 * u2 - row.target;
        const double f = inv_r * res;

        for (std::size_t k = 0; k < n; ++k) {
            const double wk = w[k], vk = v[k];
            const double dz_w = vk * s1[k] * x;
            const double dz1_w = vk * (s1[k] + wk * s2[k] * x);
            const double dz2_w = vk * (2.0 * wk * s2[k] + wk * wk * s3[k] * x);
            out[k] = f * (A * dz_w + B * dz1_w + C * dz2_w);
            out[n + k] = f * (A * vk * s1[k] + B * vk * wk * s2[k] + C * vk * wk * wk * s3[k]);
            out[2 * n + k] = f * (A * s0[k] + B * wk * s1[k] + C * wk * wk * s2[k]);
        }
        out[3 * n] = f * A;
        out[P] = res;
    }

    // Fixed-order reduction keeps the result independent of the thread count.
    std::fill(grad.begin(), grad.end(), 0.0);
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
        const double* out = buf.data() + i * stride;
        sum_sq += out[P] * out[P];
        for (std::size_t j = 0; j < P; ++j) grad[j] += out[j];
    }
    CostBreakdown cost;
    cost.pde_term = 0.5 * inv_r * sum_sq;
    add_boundaries(system, params, grad, cost);
    return cost;
}

CostBreakdown cost_and_gradient(const StepSystem& system, const NetworkParams& params,
                                std::span<double> grad, Workspace& ws, KernelKind kind,
                                int threads) {
    switch (kind) {
    case KernelKind::reference: return cost_and_gradient_reference(system, params, grad);
    case KernelKind::serial: return cost_and_gradient_fused(system, params, grad, ws, 1);
    case KernelKind::openmp: return cost_and_gradient_fused(system, params, grad, ws, threads);
    }
    throw ContractViolation("unknown kernel kind");
}

CostBreakdown cost_only(const StepSystem& system, const NetworkParams& params) {
    double sum_sq = 0.0;
    for (const ResidualRow& row : system.rows) {
        const NetEval ev = forward(params, row.y, system.activation);
        const double res =
            row.c_value * ev.value + row.c_d1 * ev.d1 + row.c_d2 * ev.d2 - row.target;
        sum_sq += res * res;
    }
    CostBreakdown cost;
    cost.pde_term = 0.5 * sum_sq / static_cast<double>(system.rows.size());
    auto bc = [&](const BoundaryRow& row) {
        const double e = row.weight * (forward(params, row.y, system.activation).value - row.target);
        return e * e;
    };
    cost.left_bc_term = bc(system.left);
    cost.right_bc_term = bc(system.right);
    cost.total = cost.pde_term + cost.left_bc_term + cost.right_bc_term;
    return cost;
}

} // namespace bsnet::kernels
