#include <benchmark/benchmark.h>

#include "sddtm/extraction.hpp"
#include "sddtm/synth.hpp"

namespace {

using namespace sddtm;

SceneData make_scene(int side) {
    SceneSpec spec;
    spec.rows = side;
    spec.cols = side;
    spec.base.kind = BaseSurface::Kind::kRamp;
    spec.base.zx = 0.02;
    spec.base.zy = -0.01;
    spec.boxes.push_back({side / 4, side / 4, side / 6, side / 6, 5.0});
    spec.boxes.push_back({(2 * side) / 3, side / 2, side / 10, side / 10, 3.0});
    spec.spikes.push_back({side / 2, (3 * side) / 4, 2.0});
    spec.noise_sigma = 0.02;
    spec.seed = 9;
    return generate(spec);
}

void bm_extract_dtm(benchmark::State& state) {
    const SceneData scene = make_scene(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_dtm(scene.dsm, ExtractionConfig{}));
    }
    state.SetItemsProcessed(state.iterations() * scene.dsm.size());
}

void bm_weights_and_assembly(benchmark::State& state) {
    const SceneData scene = make_scene(static_cast<int>(state.range(0)));
    const ExtractionConfig cfg;
    for (auto _ : state) {
        const TerrainMap t = terrain_indicator(scene.dsm, scene.dsm, cfg.t_ng);
        const WeightSet w = compute_weights(scene.dsm, scene.dsm, cfg.epsilon);
        benchmark::DoNotOptimize(assemble_system(t, w, scene.dsm, cfg));
    }
    state.SetItemsProcessed(state.iterations() * scene.dsm.size());
}

}  // namespace

BENCHMARK(bm_extract_dtm)->Arg(32)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_weights_and_assembly)->Arg(32)->Arg(64)->Arg(96)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
