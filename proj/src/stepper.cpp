#include "bsnet/stepper.hpp"

#include <cmath>
#include <string>

#include "bsnet/errors.hpp"
#include "bsnet/special_fn.hpp"

namespace bsnet {

std::vector<double> b_weights(double alpha, std::size_t count) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("b_weights: alpha must lie in (0, 1]");
    if (count == 0) throw ContractViolation("b_weights: count must be >= 1");
    std::vector<double> b(count);
    b[0] = 1.0;  // 1^(1-alpha) - 0^(1-alpha); pow(0, 0) would give 0 for alpha == 1
    const double p = 1.0 - alpha;
    for (std::size_t m = 1; m < count; ++m) {
        const double md = static_cast<double>(m);
        b[m] = std::pow(md + 1.0, p) - std::pow(md, p);
    }
    return b;
}

TimeGrid make_time_grid(double T, std::size_t N, double alpha) {
    if (!(T > 0.0)) throw ContractViolation("time grid: T must be positive");
    if (N == 0) throw ContractViolation("time grid: N must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("time grid: alpha must lie in (0, 1]");
    TimeGrid g;
    g.N = N;
    g.T = T;
    g.dt = T / static_cast<double>(N);
    g.alpha = alpha;
    if (alpha < 1.0) g.b = b_weights(alpha, N);
    return g;
}

StepHistory::StepHistory(std::vector<double> initial_values) : width_(initial_values.size()) {
    values_.push_back(std::move(initial_values));
}

void StepHistory::push(std::vector<double> values) {
    if (values.size() != width_)
        throw ContractViolation("StepHistory::push: row has " + std::to_string(values.size()) +
                                " points, expected " + std::to_string(width_));
    values_.push_back(std::move(values));
}

void StepHistory::set_rhs(std::size_t k, std::vector<double> rhs) {
    if (k >= values_.size()) throw ContractViolation("StepHistory::set_rhs: row not stored yet");
    if (rhs.size() != width_) throw ContractViolation("StepHistory::set_rhs: width mismatch");
    if (rhs_.size() <= k) rhs_.resize(k + 1);
    rhs_[k] = std::move(rhs);
}

CaputoSplit caputo_split(const TimeGrid& grid, const StepHistory& history, std::size_t n) {
    if (history.rows() < n + 1)
        throw ContractViolation("caputo residual: history holds " +
                                std::to_string(history.rows()) + " rows, step " +
                                std::to_string(n) + " needs " + std::to_string(n + 1));
    const std::vector<double> b =
        grid.b.size() > n ? grid.b : b_weights(grid.alpha, n + 1);
    const double scale =
        1.0 / (special::gamma_fn(2.0 - grid.alpha) * std::pow(grid.dt, grid.alpha));

    CaputoSplit split;
    split.kappa = scale * b[0];
    const auto last = history.row(n);
    split.known.resize(history.points());
    for (std::size_t i = 0; i < history.points(); ++i) {
        double memory = 0.0;
        for (std::size_t m = 1; m <= n; ++m) {
            const auto hi = history.row(n + 1 - m);
            const auto lo = history.row(n - m);
            memory += b[m] * (hi[i] - lo[i]);
        }
        split.known[i] = split.kappa * last[i] - scale * memory;
    }
    return split;
}

std::vector<double> caputo_residual(const TimeGrid& grid, const StepHistory& history,
                                    std::span<const double> new_values,
                                    std::span<const double> spatial_rhs, std::size_t n) {
    if (new_values.size() != history.points() || spatial_rhs.size() != history.points())
        throw ContractViolation("caputo_residual: vector length mismatch");
    const CaputoSplit split = caputo_split(grid, history, n);
    std::vector<double> out(new_values.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = split.kappa * new_values[i] - split.known[i] - spatial_rhs[i];
    return out;
}

std::vector<double> theta_residual(double theta, double dt, std::span<const double> old_values,
                                   std::span<const double> new_values,
                                   std::span<const double> rhs_old,
                                   std::span<const double> rhs_new) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw ContractViolation("theta must lie in [0, 1]");
    const std::size_t r = new_values.size();
    if (old_values.size() != r || rhs_old.size() != r || rhs_new.size() != r)
        throw ContractViolation("theta_residual: vector length mismatch");
    std::vector<double> out(r);
    for (std::size_t i = 0; i < r; ++i)
        out[i] = (new_values[i] - old_values[i]) / dt -
                 (theta * rhs_new[i] + (1.0 - theta) * rhs_old[i]);
    return out;
}

} // namespace bsnet
