#include "polycomp/classifier.hpp"
#include "polycomp/gallery.hpp"
#include "polycomp/measure.hpp"

#include <benchmark/benchmark.h>

using namespace polycomp;

static void bm_compiled_eval(benchmark::State& state)
{
    Symbol phi = gallery_build("case2");
    std::vector<CompiledPoly> cps;
    std::size_t scratch = 0;
    for (const auto& c : phi.components) {
        cps.emplace_back(c);
        scratch = std::max(scratch, cps.back().scratch_size());
    }
    std::vector<cplx> buf(scratch + 1);
    std::vector<cplx> z = {std::polar(1.0, 0.1), std::polar(1.0, -0.2), std::polar(1.0, 0.3)};
    for (auto _ : state) {
        for (const auto& cp : cps)
            benchmark::DoNotOptimize(cp.eval(z.data(), buf.data()));
    }
    state.SetItemsProcessed(state.iterations() * cps.size());
}
BENCHMARK(bm_compiled_eval);

static void bm_multipoly_eval(benchmark::State& state)
{
    Symbol phi = gallery_build("case2");
    std::vector<cplx> z = {std::polar(1.0, 0.1), std::polar(1.0, -0.2), std::polar(1.0, 0.3)};
    for (auto _ : state)
        benchmark::DoNotOptimize(eval(phi, z));
}
BENCHMARK(bm_multipoly_eval);

static void bm_torus_measure(benchmark::State& state)
{
    Symbol phi = gallery_build("h_family", {{"n", 1}});
    std::vector<cplx> eta = {1.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(torus_measure(phi, {0, 1}, eta, {0.01, 0.01}, state.range(0), 1, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_torus_measure)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

static void bm_bergman_mass(benchmark::State& state)
{
    Symbol phi = gallery_build("bidisc_z1z2");
    std::vector<cplx> eta = {1.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(bergman_mass(phi, {0, 1}, eta, {0.05, 0.05}, 0.5, state.range(0), 1, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_bergman_mass)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

static void bm_classify(benchmark::State& state, const char* name)
{
    Symbol phi = gallery_build(name);
    for (auto _ : state)
        benchmark::DoNotOptimize(classify(phi));
}
BENCHMARK_CAPTURE(bm_classify, case2, "case2")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_classify, avg2, "avg2")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
