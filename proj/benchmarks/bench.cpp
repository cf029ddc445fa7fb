#include <benchmark/benchmark.h>

#include "atlas/saddle.hpp"

using namespace atlas;

namespace {

const StokesGraph& graph() {
    static const StokesGraph g = build_graph(reference_params());
    return g;
}

ConnectionState base() { return base_state(reference_params(), base_stokes_constants(kZStar, reference_params())); }

void BM_FrameAt(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(frame_at(kZStar, reference_params()));
}
BENCHMARK(BM_FrameAt);

void BM_BuildGraph(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(build_graph(reference_params()));
}
BENCHMARK(BM_BuildGraph)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Transport(benchmark::State& st) {
    const auto& g = graph();
    const ConnectionState s = base();
    const auto path = route(s.at, {5.6, 0.2}, g);
    for (auto _ : st) benchmark::DoNotOptimize(transport(s, path, g));
}
BENCHMARK(BM_Transport)->Unit(benchmark::kMicrosecond);

void BM_BaseConstants(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(base_stokes_constants(kZStar, reference_params()));
}
BENCHMARK(BM_BaseConstants)->Unit(benchmark::kMillisecond);

void BM_Integrate(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(integrate_swallowtail(kZStar, reference_params(), 0.1));
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMillisecond);

void BM_LateTerms(benchmark::State& st) {
    const Frame f = frame_at(kZStar, reference_params());
    for (auto _ : st) benchmark::DoNotOptimize(late_terms(int(st.range(0)), 0, f, reference_params()));
}
BENCHMARK(BM_LateTerms)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
