#include <benchmark/benchmark.h>

#include "hyperstab/dispersion.hpp"
#include "hyperstab/random.hpp"
#include "hyperstab/rh.hpp"
#include "hyperstab/scan.hpp"
#include "hyperstab/sim.hpp"

using namespace hyperstab;

namespace {

std::vector<ComplexQuartic> random_quartics(std::size_t count) {
    Rng rng(1);
    std::vector<ComplexQuartic> out(count);
    for (auto& q : out)
        for (int k = 0; k < 4; ++k) {
            q.a[k] = uniform(rng, -5, 5);
            q.b[k] = uniform(rng, -5, 5);
        }
    return out;
}

const JacobianEntries kJacobian = brusselator_jacobian({1.3, 14.0});
const TransportParams kTransport{0.5, 0.5, 2.0, 1.0};

void BM_RouthHurwitzTable(benchmark::State& state) {
    const auto qs = random_quartics(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(is_stable(qs[i++ % qs.size()]));
    }
}
BENCHMARK(BM_RouthHurwitzTable);

void BM_QuarticRoots(benchmark::State& state) {
    const auto qs = random_quartics(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_roots(qs[i++ % qs.size()].to_polynomial()));
    }
}
BENCHMARK(BM_QuarticRoots);

void BM_ModeVerdict(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(mode_verdict(kJacobian, kTransport, Complex{-1.5, 2.0}));
}
BENCHMARK(BM_ModeVerdict);

void BM_Spectrum(benchmark::State& state) {
    const auto l = directed_laplacian(newman_watts_directed(static_cast<int>(state.range(0)), 5, 0.02, 1));
    for (auto _ : state)
        benchmark::DoNotOptimize(spectrum(l));
}
BENCHMARK(BM_Spectrum)->Arg(50)->Arg(200);

void BM_LambdaPlaneScan(benchmark::State& state) {
    const int res = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(scan_lambda_plane(kJacobian, kTransport, {-6, 0}, {-3, 3}, res, {1}));
    state.SetItemsProcessed(state.iterations() * res * res);
}
BENCHMARK(BM_LambdaPlaneScan)->Arg(41)->Arg(121)->Unit(benchmark::kMillisecond);

void BM_SimulateSteps(benchmark::State& state) {
    const auto model = brusselator({1.3, 14.0});
    const auto l = directed_laplacian(newman_watts_directed(50, 5, 0.02, 1));
    const auto init = perturbed_equilibrium(model, l, 1e-6, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(model, kTransport, l, init, 0.01, 1000, {1000, 1e12}));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SimulateSteps)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
