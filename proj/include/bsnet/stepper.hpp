#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bsnet {

/// Uniform time grid over [0, T] with the derivative order it serves.
struct TimeGrid {
    std::size_t N = 0;
    double T = 0.0;
    double dt = 0.0;
    double alpha = 1.0;
    std::vector<double> b;  // L1 weights b_0..b_{N-1}; empty for alpha == 1

    double time(std::size_t k) const { return static_cast<double>(k) * dt; }
};

TimeGrid make_time_grid(double T, std::size_t N, double alpha = 1.0);

/// L1 weights b_m = (m+1)^(1-alpha) - m^(1-alpha), m = 0..count-1.
std::vector<double> b_weights(double alpha, std::size_t count);

/// Point values of every completed step at the collocation points; row 0 is the
/// initial (or payoff) data. Optionally also the spatial operator applied to
/// each row, which the explicit part of a theta-scheme needs.
class StepHistory {
public:
    explicit StepHistory(std::vector<double> initial_values);

    std::size_t rows() const noexcept { return values_.size(); }
    std::size_t points() const noexcept { return width_; }
    std::span<const double> row(std::size_t k) const { return values_.at(k); }

    void push(std::vector<double> values);

    bool has_rhs(std::size_t k) const { return k < rhs_.size() && !rhs_[k].empty(); }
    std::span<const double> rhs_row(std::size_t k) const { return rhs_.at(k); }
    void set_rhs(std::size_t k, std::vector<double> rhs);

private:
    std::size_t width_;
    std::vector<std::vector<double>> values_;
    std::vector<std::vector<double>> rhs_;
};

/// gamma1 U_SS + gamma2 U_S + gamma3 U + f, with coefficients that may depend on (S, t).
struct SpatialOperator {
    using Coefficient = std::function<double(double S, double t)>;
    Coefficient gamma1;
    Coefficient gamma2;
    Coefficient gamma3;
    Coefficient forcing;

    double apply(double S, double t, double U, double U_S, double U_SS) const {
        return gamma1(S, t) * U_SS + gamma2(S, t) * U_S + gamma3(S, t) * U + forcing(S, t);
    }
};

/// Discrete Caputo residual at step n+1 given the candidate values and the
/// spatial operator evaluated on the candidate.
std::vector<double> caputo_residual(const TimeGrid& grid, const StepHistory& history,
                                    std::span<const double> new_values,
                                    std::span<const double> spatial_rhs, std::size_t n);

/// theta-scheme residual (new - old)/dt - (theta rhs_new + (1 - theta) rhs_old).
std::vector<double> theta_residual(double theta, double dt, std::span<const double> old_values,
                                   std::span<const double> new_values,
                                   std::span<const double> rhs_old,
                                   std::span<const double> rhs_new);

/// The Caputo residual is affine in the new values:
///   residual_i = kappa * new_i - known_i - rhs_i.
struct CaputoSplit {
    double kappa = 0.0;
    std::vector<double> known;
};
CaputoSplit caputo_split(const TimeGrid& grid, const StepHistory& history, std::size_t n);

} // namespace bsnet
