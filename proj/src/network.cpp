#include "bsnet/network.hpp"

#include <cmath>
#include <random>

#include "bsnet/errors.hpp"
#include "bsnet/special_fn.hpp"

namespace bsnet {

template <class Tag>
LayeredVector<Tag>::LayeredVector(std::size_t n_hidden)
    : n_(n_hidden), flat_(param_count(n_hidden), 0.0) {
    if (n_hidden == 0) throw ContractViolation("network needs at least one hidden neuron");
}

template <class Tag>
LayeredVector<Tag>::LayeredVector(std::size_t n_hidden, std::vector<double> flat)
    : n_(n_hidden), flat_(std::move(flat)) {
    if (n_hidden == 0) throw ContractViolation("network needs at least one hidden neuron");
    if (flat_.size() != param_count(n_hidden))
        throw ContractViolation("flat parameter vector has " + std::to_string(flat_.size()) +
                                " entries, expected " + std::to_string(param_count(n_hidden)));
}

template class LayeredVector<NetworkParamsTag>;
template class LayeredVector<ParamGradientTag>;

NetworkParams init_params(std::size_t n, std::uint64_t seed, double scale) {
    if (n == 0) throw ContractViolation("init_params: n must be >= 1");
    if (!(scale > 0.0)) throw ContractViolation("init_params: scale must be positive");
    NetworkParams p(n);
    // mt19937_64 output is specified by the standard; the distribution is
    // applied by hand so results do not depend on the library's implementation.
    std::mt19937_64 gen(seed);
    for (double& value : p.flat()) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
        value = scale * (2.0 * u - 1.0);
    }
    return p;
}

namespace {

struct OutputJet {
    double f0, f1, f2, f3;  // Psi and its first three derivatives at z
};

OutputJet output_jet(double z, OutputActivation act) {
    if (act == OutputActivation::identity) return {z, 1.0, 0.0, 0.0};
    const double s = special::sigmoid(z);
    return {s, special::sigmoid_d1_from(s), special::sigmoid_d2_from(s),
            special::sigmoid_d3_from(s)};
}

} // namespace

NetEval forward(const NetworkParams& params, double x, OutputActivation act) {
    const auto w = params.hidden_weights();
    const auto b = params.hidden_biases();
    const auto v = params.output_weights();
    double z = params.output_bias(), z1 = 0.0, z2 = 0.0;
    for (std::size_t i = 0; i < params.n_hidden(); ++i) {
        const double s = special::sigmoid(w[i] * x + b[i]);
        z += v[i] * s;
        z1 += v[i] * w[i] * special::sigmoid_d1_from(s);
        z2 += v[i] * w[i] * w[i] * special::sigmoid_d2_from(s);
    }
    const OutputJet psi = output_jet(z, act);
    return {psi.f0, psi.f1 * z1, psi.f2 * z1 * z1 + psi.f1 * z2};
}

EvalGradients param_grads(const NetworkParams& params, double x, OutputActivation act) {
    const std::size_t n = params.n_hidden();
    const auto w = params.hidden_weights();
    const auto b = params.hidden_biases();
    const auto v = params.output_weights();

    // Gradients of the pre-activation output z and its x-derivatives z1, z2.
    ParamGradient gz(n), gz1(n), gz2(n);
    double z = params.output_bias(), z1 = 0.0, z2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = special::sigmoid(w[i] * x + b[i]);
        const double s1 = special::sigmoid_d1_from(s);
        const double s2 = special::sigmoid_d2_from(s);
        const double s3 = special::sigmoid_d3_from(s);
        z += v[i] * s;
        z1 += v[i] * w[i] * s1;
        z2 += v[i] * w[i] * w[i] * s2;

        gz.hidden_weights()[i] = v[i] * s1 * x;
        gz.hidden_biases()[i] = v[i] * s1;
        gz.output_weights()[i] = s;

        gz1.hidden_weights()[i] = v[i] * (s1 + w[i] * s2 * x);
        gz1.hidden_biases()[i] = v[i] * w[i] * s2;
        gz1.output_weights()[i] = w[i] * s1;

        gz2.hidden_weights()[i] = v[i] * (2.0 * w[i] * s2 + w[i] * w[i] * s3 * x);
        gz2.hidden_biases()[i] = v[i] * w[i] * w[i] * s3;
        gz2.output_weights()[i] = w[i] * w[i] * s2;
    }
    gz.output_bias() = 1.0;

    const OutputJet psi = output_jet(z, act);
    EvalGradients out{ParamGradient(n), ParamGradient(n), ParamGradient(n)};
    auto gv = out.value.flat();
    auto g1 = out.d1.flat();
    auto g2 = out.d2.flat();
    const auto a = gz.flat();
    const auto a1 = gz1.flat();
    const auto a2 = gz2.flat();
    for (std::size_t j = 0; j < a.size(); ++j) {
        gv[j] = psi.f1 * a[j];
        g1[j] = psi.f2 * z1 * a[j] + psi.f1 * a1[j];
        g2[j] = (psi.f3 * z1 * z1 + psi.f2 * z2) * a[j] + 2.0 * psi.f2 * z1 * a1[j] +
                psi.f1 * a2[j];
    }
    return out;
}

ParamGradient param_grad(const NetworkParams& params, double x, EvalTarget target,
                         OutputActivation act) {
    EvalGradients all = param_grads(params, x, act);
    switch (target) {
    case EvalTarget::value: return std::move(all.value);
    case EvalTarget::d1: return std::move(all.d1);
    case EvalTarget::d2: return std::move(all.d2);
    }
    throw ContractViolation("param_grad: unknown target");
}

} // namespace bsnet
