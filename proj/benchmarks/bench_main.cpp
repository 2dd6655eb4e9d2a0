#include <benchmark/benchmark.h>

#include "seqimit/fixtures.hpp"
#include "seqimit/imitation.hpp"
#include "seqimit/oracle.hpp"
#include "seqimit/scm.hpp"
#include "seqimit/separation.hpp"

using namespace seqimit;

namespace {

void bm_construct_plan(benchmark::State& state, const char* name) {
    const Fixture f = fixture(name);
    for (auto _ : state) benchmark::DoNotOptimize(construct_plan(f.query));
}

void bm_enumerate_def3(benchmark::State& state, const char* name) {
    const Fixture f = fixture(name);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::enumerate_def3(f.query));
}

void bm_d_separated(benchmark::State& state) {
    const Fixture f = fixture("figb1");
    const auto& g = f.query.diagram;
    NodeSet a(g.size(), {f.query.actions.front()});
    NodeSet b(g.size(), {f.query.target});
    for (auto _ : state) benchmark::DoNotOptimize(d_separated(g, a, b, g.empty_set()));
}

void bm_exact_cloning(benchmark::State& state, const char* name) {
    const Fixture f = fixture(name);
    const Contexts ctx = *strategy_contexts(f.query, Strategy::SeqPiBackdoor);
    std::uint64_t i = 0;
    for (auto _ : state) {
        DiscreteScm m = random_scm(f.query.diagram, 0, i++);
        Policy p = fit_policy_exact(m, f.query.actions, ctx);
        benchmark::DoNotOptimize(policy_value(m, p, f.query.target));
    }
}

}  // namespace

BENCHMARK_CAPTURE(bm_construct_plan, fig2c, "fig2c");
BENCHMARK_CAPTURE(bm_construct_plan, figb1, "figb1");
BENCHMARK_CAPTURE(bm_construct_plan, fig4, "fig4");
BENCHMARK_CAPTURE(bm_enumerate_def3, fig2c, "fig2c");
BENCHMARK_CAPTURE(bm_enumerate_def3, fig4, "fig4");
BENCHMARK(bm_d_separated);
BENCHMARK_CAPTURE(bm_exact_cloning, table1_row1, "table1_row1");
BENCHMARK_CAPTURE(bm_exact_cloning, figb1, "figb1");
BENCHMARK_MAIN();
