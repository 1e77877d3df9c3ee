// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "fsteiner/ifs.hpp"
#include "fsteiner/kernels.hpp"
#include "fsteiner/smt.hpp"

namespace {

using namespace fsteiner;

const IfsParams kParams(0.04);

void leaves_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(serial::leaf_points(kParams, static_cast<int>(st.range(0))));
}
void leaves_parallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(kernels::leaf_points(kParams, static_cast<int>(st.range(0))));
}

/// The two halves f_1(A_N), f_2(A_N) of A_{N+1}.
struct Halves {
    std::vector<Point> a, b;
    explicit Halves(int depth) {
        const auto all = serial::leaf_points(kParams, depth + 1);
        a.assign(all.begin(), all.begin() + all.size() / 2);
        b.assign(all.begin() + all.size() / 2, all.end());
    }
};

void cross_serial(benchmark::State& st) {
    const Halves h(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(serial::min_cross_distance(h.a, h.b));
}
void cross_parallel(benchmark::State& st) {
    const Halves h(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::min_cross_distance(h.a, h.b));
}

void hausdorff_serial(benchmark::State& st) {
    const auto a = serial::leaf_points(kParams, static_cast<int>(st.range(0)));
    const auto b = serial::leaf_points(kParams, static_cast<int>(st.range(0)) + 1);
    for (auto _ : st) benchmark::DoNotOptimize(serial::directed_hausdorff(b, a));
}
void hausdorff_parallel(benchmark::State& st) {
    const auto a = serial::leaf_points(kParams, static_cast<int>(st.range(0)));
    const auto b = serial::leaf_points(kParams, static_cast<int>(st.range(0)) + 1);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::directed_hausdorff(b, a));
}

TerminalSpec root_and_leaves(int depth) {
    TerminalSpec spec;
    spec.points.push_back({0.0, 0.0});
    for (const Point& p : serial::leaf_points(kParams, depth)) spec.points.push_back(p);
    return spec;
}

void solve_serial(benchmark::State& st) {
    const auto spec = root_and_leaves(static_cast<int>(st.range(0)));
    SolveOptions opt;
    opt.max_terminals = spec.topology_terminals();
    for (auto _ : st) benchmark::DoNotOptimize(serial::solve(spec, opt).length);
}
void solve_parallel(benchmark::State& st) {
    const auto spec = root_and_leaves(static_cast<int>(st.range(0)));
    SolveOptions opt;
    opt.max_terminals = spec.topology_terminals();
    for (auto _ : st) benchmark::DoNotOptimize(solve(spec, opt).length);
}

}  // namespace

BENCHMARK(leaves_serial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(leaves_parallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(cross_serial)->Arg(11)->Arg(13)->Unit(benchmark::kMillisecond);
BENCHMARK(cross_parallel)->Arg(11)->Arg(13)->Unit(benchmark::kMillisecond);
BENCHMARK(hausdorff_serial)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(hausdorff_parallel)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(solve_serial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(solve_parallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
