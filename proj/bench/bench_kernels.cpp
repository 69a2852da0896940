// Cost-and-gradient kernels on the collocation systems of the shipped examples.
// Arguments: (collocation points, hidden units).

#include <benchmark/benchmark.h>

#include "bsnet/kernels.hpp"
#include "bsnet/problems.hpp"
#include "bsnet/solver.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace {

using namespace bsnet;

struct Fixture {
    StepSystem system;
    NetworkParams params;
};

Fixture make_fixture(std::size_t points, std::size_t hidden) {
    const ProblemSpec call = european_call(0.05, 0.2, 10.0, 1.0);
    SolverSetup setup;
    setup.map = DomainMap::truncated(15.0);
    setup.steps = 20;
    setup.collocation = points;
    setup.n_hidden = hidden;
    const StepContext ctx = make_context(call, setup);
    std::vector<double> row;
    for (std::size_t i = 0; i < ctx.points.r(); ++i) row.push_back(call.data(ctx.point_S(i)).v);
    const StepHistory history(row);
    return {assemble_step(ctx, history, 0), init_params(hidden, 3, 1.0)};
}

void BM_reference(benchmark::State& state) {
    const Fixture f = make_fixture(state.range(0), state.range(1));
    std::vector<double> grad(f.params.size());
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::cost_and_gradient_reference(f.system, f.params, grad));
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_fused_serial(benchmark::State& state) {
    const Fixture f = make_fixture(state.range(0), state.range(1));
    std::vector<double> grad(f.params.size());
    kernels::Workspace ws;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::cost_and_gradient_fused(f.system, f.params, grad, ws, 1));
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_fused_openmp(benchmark::State& state) {
    const Fixture f = make_fixture(state.range(0), state.range(1));
    std::vector<double> grad(f.params.size());
    kernels::Workspace ws;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::cost_and_gradient_fused(f.system, f.params, grad, ws, 0));
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
#if defined(_OPENMP)
    state.counters["threads"] = omp_get_max_threads();
#endif
}

void shapes(benchmark::internal::Benchmark* b) {
    for (long points : {60, 150, 1000, 10000})
        for (long hidden : {6, 20}) b->Args({points, hidden});
}

} // namespace

BENCHMARK(BM_reference)->Apply(shapes);
BENCHMARK(BM_fused_serial)->Apply(shapes);
BENCHMARK(BM_fused_openmp)->Apply(shapes);

BENCHMARK_MAIN();
