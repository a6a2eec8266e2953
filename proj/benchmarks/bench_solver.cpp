#include <benchmark/benchmark.h>

#include <utility>
#include <vector>

#include "sddtm/csr.hpp"
#include "sddtm/extraction.hpp"
#include "sddtm/solver.hpp"
#include "sddtm/synth.hpp"

namespace {

using namespace sddtm;

// First-iteration system of a representative scene: box and spike on a plane,
// weights taken at f_hat = g exactly as the extraction loop does.
std::pair<CsrMatrix, std::vector<double>> first_iteration_system(int side) {
    SceneSpec spec;
    spec.rows = side;
    spec.cols = side;
    spec.base.kind = BaseSurface::Kind::kConstant;
    spec.base.z = 100.0;
    spec.boxes.push_back({side / 4, side / 4, side / 8, side / 8, 5.0});
    spec.spikes.push_back({side / 2, side / 2, 3.0});
    spec.noise_sigma = 0.02;
    spec.seed = 9;
    const SceneData scene = generate(spec);

    const ExtractionConfig cfg;
    const TerrainMap t = terrain_indicator(scene.dsm, scene.dsm, cfg.t_ng);
    const WeightSet w = compute_weights(scene.dsm, scene.dsm, cfg.epsilon);
    return assemble_system(t, w, scene.dsm, cfg);
}

void bm_ic0_factor(benchmark::State& state) {
    const auto [a, b] = first_iteration_system(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ic0_factor(a));
    }
    state.SetItemsProcessed(state.iterations() * a.n_rows);
}

void bm_pcg_solve(benchmark::State& state) {
    const auto [a, b] = first_iteration_system(static_cast<int>(state.range(0)));
    const IcFactor precond = ic0_factor(a);
    const std::vector<double> x0(b.size(), 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pcg_solve(a, b, x0, precond, 1e-6, 1000));
    }
    state.SetItemsProcessed(state.iterations() * a.n_rows);
}

void bm_spmv(benchmark::State& state) {
    const auto [a, b] = first_iteration_system(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(spmv(a, b));
    }
    state.SetItemsProcessed(state.iterations() * a.nnz());
}

}  // namespace

BENCHMARK(bm_ic0_factor)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_pcg_solve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_spmv)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
