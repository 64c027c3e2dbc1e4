#include <benchmark/benchmark.h>

#include "snake/engine.hpp"
#include "snake/oracle.hpp"
#include "snake/scheduler.hpp"
#include "snake/state.hpp"

namespace {

snake::RunConfig config_for(int n, int k) {
    snake::RunConfig config;
    config.rows = n;
    config.cols = n;
    config.k = k;
    config.seed = 1;
    snake::validate_and_resolve(config);
    return config;
}

void BM_CalibrateGraph(benchmark::State& state) {
    const snake::RunConfig config = config_for(static_cast<int>(state.range(0)), 50);
    for (auto _ : state) {
        snake::CalibrationState cal = snake::make_state(config);
        snake::calibrate_graph(cal);
        benchmark::DoNotOptimize(cal.database.data());
    }
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_CalibrateGraph)->Arg(4)->Arg(6)->Arg(8)->Complexity();

// Two constraint-disjoint patches separated by a pre-calibrated band, so the
// parallel path actually has independent subgoals to fan out.
snake::CalibrationState banded_state(bool parallel) {
    snake::RunConfig config;
    config.rows = 6;
    config.cols = 13;
    config.k = 50;
    config.seed = 1;
    config.parallel = parallel;
    snake::validate_and_resolve(config);

    snake::CalibrationState full = snake::make_state(config);
    std::vector<snake::ElementId> band;
    for (const snake::GraphElement& e : full.graph->elements()) {
        if (e.is_parasitic()) {
            continue;
        }
        const int lo = e.is_node() ? e.col
                                   : std::min(full.graph->element(e.node_a).col,
                                              full.graph->element(e.node_b).col);
        const int hi = e.is_node() ? e.col
                                   : std::max(full.graph->element(e.node_a).col,
                                              full.graph->element(e.node_b).col);
        if (lo >= 5 && hi <= 7) {
            band.push_back(e.id);
        }
    }
    snake::CalibrationState band_state = snake::make_state(config, band);
    snake::calibrate_graph(band_state);
    std::vector<snake::RestoredRecord> records;
    for (snake::ElementId g : band) {
        const snake::DbEntry& entry = band_state.database[static_cast<std::size_t>(g)];
        records.push_back(snake::RestoredRecord{g, entry.freq_index, entry.step, entry.objective});
    }
    snake::restore_status(full, records);
    return full;
}

void BM_CalibrateSubgoals(benchmark::State& state) {
    const snake::CalibrationState base = banded_state(state.range(0) != 0);
    for (auto _ : state) {
        snake::CalibrationState cal = base;
        snake::calibrate_graph(cal);
        benchmark::DoNotOptimize(cal.database.data());
    }
}
BENCHMARK(BM_CalibrateSubgoals)->Arg(0)->Arg(1)->ArgNames({"parallel"});

void BM_StepExhaustive(benchmark::State& state) {
    // Central node step on a fresh 4x4: dimension 3..5 depending on the seed;
    // k^3 fits the default budget, so this exercises the exhaustive branch.
    const snake::RunConfig config = config_for(4, 100);
    for (auto _ : state) {
        snake::CalibrationState cal = snake::make_state(config);
        snake::calibrate_element(cal, 0);
        benchmark::DoNotOptimize(cal.step_log.data());
    }
}
BENCHMARK(BM_StepExhaustive);

void BM_Segmentation(benchmark::State& state) {
    const snake::RunConfig config = config_for(8, 50);
    const snake::CalibrationState cal = snake::make_state(config);
    for (auto _ : state) {
        auto subgoals = snake::build_calibration_subgoals(cal);
        for (const auto& sg : subgoals) {
            benchmark::DoNotOptimize(snake::build_traversal_threads(cal, sg));
        }
    }
}
BENCHMARK(BM_Segmentation);

void BM_TotalSystemError(benchmark::State& state) {
    const snake::RunConfig config = config_for(8, 50);
    snake::CalibrationState cal = snake::make_state(config);
    snake::calibrate_graph(cal);
    const snake::GlobalAssignment assignment = snake::assignment_from_state(cal);
    for (auto _ : state) {
        benchmark::DoNotOptimize(snake::total_system_error(cal, assignment));
    }
}
BENCHMARK(BM_TotalSystemError);

}  // namespace

BENCHMARK_MAIN();
