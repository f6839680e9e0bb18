#include <benchmark/benchmark.h>

#include <vector>

#include "genconvex/classes.hpp"
#include "genconvex/probe_kernels.hpp"

using namespace genconvex;

namespace {

struct Setup {
    FuncDef f = from_expression("exp(x) + x^3 - sqrt(x)", {0.0, 2.0});
    ClassSpec spec = ClassSpec::make(ClassTag::PhiHMConvex, from_expression("t^0.5", {0.0, 1.0}), 0.7,
                                     from_expression("x^2/2", {0.0, 2.0}), 2.0);
};

template <ProbeSummary (*Scan)(const FuncDef&, const ClassSpec&, std::span<const Triple>)>
void scan(benchmark::State& state) {
    const Setup s;
    const std::vector<Triple> probes = certify_probes(s.spec, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(Scan(s.f, s.spec, probes));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(probes.size()));
}

}  // namespace

BENCHMARK(scan<scan_probes_serial>)->Name("scan_serial")->RangeMultiplier(10)->Range(1'000, 1'000'000);
BENCHMARK(scan<scan_probes_parallel>)->Name("scan_parallel")->RangeMultiplier(10)->Range(1'000, 1'000'000);

BENCHMARK_MAIN();
