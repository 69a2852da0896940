#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bsnet {

enum class OutputActivation { identity, sigmoid };

/// Parameters of a 1-n-1 network stored flat in the order
/// (hidden_weights, hidden_biases, output_weights, output_bias).
/// The Tag keeps parameters and gradients apart at compile time.
template <class Tag>
class LayeredVector {
public:
    LayeredVector() = default;
    explicit LayeredVector(std::size_t n_hidden);
    LayeredVector(std::size_t n_hidden, std::vector<double> flat);

    std::size_t n_hidden() const noexcept { return n_; }
    std::size_t size() const noexcept { return flat_.size(); }

    std::span<double> hidden_weights() noexcept { return {flat_.data(), n_}; }
    std::span<double> hidden_biases() noexcept { return {flat_.data() + n_, n_}; }
    std::span<double> output_weights() noexcept { return {flat_.data() + 2 * n_, n_}; }
    double& output_bias() noexcept { return flat_[3 * n_]; }

    std::span<const double> hidden_weights() const noexcept { return {flat_.data(), n_}; }
    std::span<const double> hidden_biases() const noexcept { return {flat_.data() + n_, n_}; }
    std::span<const double> output_weights() const noexcept { return {flat_.data() + 2 * n_, n_}; }
    double output_bias() const noexcept { return flat_[3 * n_]; }

    std::span<double> flat() noexcept { return flat_; }
    std::span<const double> flat() const noexcept { return flat_; }
    const std::vector<double>& vector() const noexcept { return flat_; }

    bool operator==(const LayeredVector&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> flat_;
};

using NetworkParams = LayeredVector<struct NetworkParamsTag>;
using ParamGradient = LayeredVector<struct ParamGradientTag>;

/// Network output and its first two derivatives with respect to the input.
struct NetEval {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

enum class EvalTarget { value, d1, d2 };

/// Uniform draws in [-scale, scale] from a generator seeded by `seed`.
NetworkParams init_params(std::size_t n, std::uint64_t seed, double scale);

NetEval forward(const NetworkParams& params, double x,
                OutputActivation act = OutputActivation::identity);

/// Exact gradient of one NetEval field with respect to every parameter.
ParamGradient param_grad(const NetworkParams& params, double x, EvalTarget target,
                         OutputActivation act = OutputActivation::identity);

/// Gradients of all three NetEval fields at once.
struct EvalGradients {
    ParamGradient value;
    ParamGradient d1;
    ParamGradient d2;
};
EvalGradients param_grads(const NetworkParams& params, double x,
                          OutputActivation act = OutputActivation::identity);

/// Number of parameters of an n-hidden network (3n + 1).
constexpr std::size_t param_count(std::size_t n) { return 3 * n + 1; }

} // namespace bsnet
