#include <bovdyn/interval.hpp>
#include <bovdyn/maps.hpp>
#include <bovdyn/render.hpp>

#include <benchmark/benchmark.h>

using namespace bovdyn;

static void BM_EvalCompiled(benchmark::State& state)
{
    const Evaluator f(maps::f3());
    Complex z(0.3, 0.7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(f(z));
        z += Complex(1e-9, 0.0);
    }
}
BENCHMARK(BM_EvalCompiled);

static void BM_EvalTree(benchmark::State& state)
{
    const MapExpr f = maps::f3();
    for (auto _ : state)
        benchmark::DoNotOptimize(eval(f, Complex(0.3, 0.7)));
}
BENCHMARK(BM_EvalTree);

static void BM_Differentiate8(benchmark::State& state)
{
    const MapExpr p = maps::p();
    for (auto _ : state)
        benchmark::DoNotOptimize(differentiate(p, 8));
}
BENCHMARK(BM_Differentiate8);

static void BM_IntervalEval(benchmark::State& state)
{
    const MapExpr p = maps::p();
    const Interval x(-0.792, -0.72);
    for (auto _ : state)
        benchmark::DoNotOptimize(ieval(p, x));
}
BENCHMARK(BM_IntervalEval);

static void BM_Cascade(benchmark::State& state)
{
    const MapExpr p = maps::p();
    for (auto _ : state)
        benchmark::DoNotOptimize(cascade_sign(p, Interval(-0.792, -0.72), 8));
}
BENCHMARK(BM_Cascade)->Unit(benchmark::kMillisecond);

static void BM_Orbit(benchmark::State& state)
{
    const Evaluator f(maps::f_lambda(4.0));
    for (auto _ : state)
        benchmark::DoNotOptimize(iterate_orbit(f, Complex(0.5, 0.1)));
}
BENCHMARK(BM_Orbit);

static void BM_RenderF3(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const MapExpr f = maps::f3();
    for (auto _ : state)
        benchmark::DoNotOptimize(render(f, {-0.9, 0.0, 3.0, 3.0}, n, n));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_RenderF3)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
