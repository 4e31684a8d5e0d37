// Parallel kernels against their serial references on the simulation grid.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <random>

#include "invasion/adhesion.hpp"
#include "invasion/diffusion.hpp"
#include "invasion/simulation.hpp"
#include "invasion/weno.hpp"

using namespace invasion;

namespace {

struct Scene {
    MacroGrid grid;
    DomainMask mask;
    TumourState u;
    Field D;
    SensingKernels kernels;

    Scene() {
        const ModelParams p;
        grid = simulation_grid(p);
        Mask tumour(grid.n);
        for (int j = 0; j < grid.n; ++j)
            for (int i = 0; i < grid.n; ++i) tumour(i, j) = std::hypot(i - 64.0, j - 64.0) <= 40.0 ? 1 : 0;
        mask = compute_masks(tumour, grid);
        u = initial_state(grid, tumour);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> d(0.0, 0.3);
        D = Field(grid.n);
        for (std::size_t k = 0; k < u.c.size(); ++k) {
            u.c[k] = d(rng);
            u.m1[k] = d(rng) / 4;
            u.m2[k] = d(rng) / 4;
            u.f[k] = d(rng);
            u.theta_x[k] = d(rng) - 0.15;
            u.theta_y[k] = d(rng) - 0.15;
            D[k] = 1.0 + d(rng);
        }
        kernels = build_sensing_kernels(p.R, p.sector_annuli, p.sector_exponent, grid);
    }
};

const Scene& scene() {
    static const Scene s;
    return s;
}

// range(0) = OpenMP threads for the parallel variants
void BM_DiffusionParallel(benchmark::State& st) {
    const Scene& s = scene();
    omp_set_num_threads(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(diffusion_interior(s.D, s.u.c, s.mask, s.grid.h));
}

void BM_DiffusionReference(benchmark::State& st) {
    const Scene& s = scene();
    for (auto _ : st) benchmark::DoNotOptimize(reference::diffusion_interior(s.D, s.u.c, s.mask, s.grid.h));
}

void BM_AdhesionParallel(benchmark::State& st) {
    const Scene& s = scene();
    const AdhesionStrengths str;
    omp_set_num_threads(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(adhesion_c(s.u, s.kernels, str, s.mask));
}

void BM_AdhesionReference(benchmark::State& st) {
    const Scene& s = scene();
    const AdhesionStrengths str;
    for (auto _ : st) benchmark::DoNotOptimize(reference::adhesion_c(s.u, s.kernels, str, s.mask));
}

void BM_WenoDivergence(benchmark::State& st) {
    const Scene& s = scene();
    const WenoConfig cfg;
    omp_set_num_threads(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(weno_divergence_inside(s.u.c, s.u.m1, s.u.f, 1.0, 1.0, s.mask, s.grid.h, cfg));
}

std::vector<std::array<Window, 2>> windows() {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<std::array<Window, 2>> w(16384);
    for (auto& pair : w)
        for (auto& win : pair)
            for (double& x : win) x = d(rng);
    return w;
}

void BM_WenoWindowConvolution(benchmark::State& st) {
    const auto w = windows();
    const WenoConfig cfg;
    for (auto _ : st)
        for (const auto& pair : w) benchmark::DoNotOptimize(flux_difference(pair[0], pair[1], cfg));
    st.SetItemsProcessed(st.iterations() * static_cast<long long>(w.size()));
}

void BM_WenoWindowReference(benchmark::State& st) {
    const auto w = windows();
    const WenoConfig cfg;
    for (auto _ : st)
        for (const auto& pair : w) benchmark::DoNotOptimize(reference::flux_difference(pair[0], pair[1], cfg));
    st.SetItemsProcessed(st.iterations() * static_cast<long long>(w.size()));
}

void thread_counts(benchmark::internal::Benchmark* b) {
    for (int t = 1; t <= omp_get_max_threads(); t *= 2) b->Arg(t);
    if ((omp_get_max_threads() & (omp_get_max_threads() - 1)) != 0) b->Arg(omp_get_max_threads());
}

}  // namespace

BENCHMARK(BM_DiffusionParallel)->Apply(thread_counts)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DiffusionReference)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AdhesionParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdhesionReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WenoDivergence)->Apply(thread_counts)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_WenoWindowConvolution)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_WenoWindowReference)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
