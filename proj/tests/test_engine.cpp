#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "snake/database.hpp"
#include "snake/engine.hpp"
#include "snake/errors.hpp"
#include "snake/oracle.hpp"
#include "snake/state.hpp"

using namespace snake;

namespace {

RunConfig grid_config(int rows, int cols, int k = 20) {
    RunConfig config;
    config.rows = rows;
    config.cols = cols;
    config.k = k;
    config.heuristic = Heuristic::kInsertionOrder;
    validate_and_resolve(config);
    return config;
}

void mark_calibrated(CalibrationState& state, const std::vector<ElementId>& elements) {
    std::vector<RestoredRecord> records;
    int step = state.next_step;
    for (ElementId g : elements) {
        records.push_back(RestoredRecord{g, 0, step++, 0.0});
    }
    restore_status(state, records);
}

// Checks the bookkeeping invariants that must hold after any complete run:
// status covers the goal exactly once, and each step is well-formed.
void check_complete_run(const CalibrationState& state) {
    REQUIRE(state.complete());
    std::set<ElementId> seen;
    for (const StatusEntry& e : state.status) {
        CHECK(seen.insert(e.element).second);  // once and only once
        CHECK(state.is_calibrated(e.element));
    }
    CHECK(seen.size() == state.goal.size());
    for (const StepRecord& r : state.step_log) {
        CHECK(r.parameter_count >= 1);
    }
}

std::vector<ElementId> column_slice(const CalibrationState& state, int col_lo, int col_hi) {
    std::vector<ElementId> out;
    const ProcessorGraph& g = *state.graph;
    for (const GraphElement& e : g.elements()) {
        if (e.is_parasitic()) {
            continue;
        }
        int lo;
        int hi;
        if (e.is_node()) {
            lo = e.col;
            hi = e.col;
        } else {
            lo = std::min(g.element(e.node_a).col, g.element(e.node_b).col);
            hi = std::max(g.element(e.node_a).col, g.element(e.node_b).col);
        }
        if (lo >= col_lo && hi <= col_hi) {
            out.push_back(e.id);
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("build_parameters") {
    SUBCASE("d_p = 0 is the central element alone") {
        RunConfig config = grid_config(3, 3);
        config.d_p = 0;
        CalibrationState state = make_state(config);
        CHECK(build_parameters(state, 4) == std::vector<ElementId>{4});
    }
    SUBCASE("d_p = 1 around a fresh interior node: node + 4 engineered edges") {
        CalibrationState state = make_state(grid_config(3, 3));
        const ElementId center = *state.graph->find_node(1, 1);
        const auto params = build_parameters(state, center);
        CHECK(params.size() == 5);
        CHECK(std::find(params.begin(), params.end(), center) != params.end());
        for (ElementId p : params) {
            CHECK_FALSE(state.graph->element(p).is_parasitic());
        }
    }
    SUBCASE("calibrated incident edges shrink the set to the center") {
        CalibrationState state = make_state(grid_config(3, 3));
        const ElementId center = *state.graph->find_node(1, 1);
        std::vector<ElementId> edges;
        for (const Neighbor& nb : state.graph->neighborhood(center, 1)) {
            if (state.graph->element(nb.id).is_engineered()) {
                edges.push_back(nb.id);
            }
        }
        mark_calibrated(state, edges);
        CHECK(build_parameters(state, center) == std::vector<ElementId>{center});
    }
    SUBCASE("already calibrated central element is a contract violation") {
        CalibrationState state = make_state(grid_config(2, 2));
        mark_calibrated(state, {0});
        CHECK_THROWS_AS(build_parameters(state, 0), ContractViolation);
    }
}

TEST_CASE("build_constraints") {
    SUBCASE("fresh graph has none") {
        CalibrationState state = make_state(grid_config(3, 3));
        const std::vector<ElementId> p{4};
        CHECK(build_constraints(state, p).empty());
    }
    SUBCASE("xeb: only co-active calibrated nodes constrain a node") {
        CalibrationState state = make_state(grid_config(3, 3));
        const ElementId center = *state.graph->find_node(1, 1);
        std::vector<ElementId> others;
        for (const GraphElement& e : state.graph->elements()) {
            if (e.is_node() && e.id != center) {
                others.push_back(e.id);
            }
        }
        mark_calibrated(state, others);
        const std::vector<ElementId> p{center};
        const auto constraints = build_constraints(state, p);
        CHECK(constraints.size() == 8);  // every other node is within d_r = 4
        for (ElementId r : constraints) {
            CHECK(state.graph->element(r).is_node());
        }
    }
    SUBCASE("unstructured: calibrated edges constrain too") {
        RunConfig config = grid_config(3, 3);
        config.algorithm = AlgorithmMode::kUnstructured;
        CalibrationState state = make_state(config);
        const ElementId center = *state.graph->find_node(1, 1);
        std::vector<ElementId> others;
        for (ElementId g : state.goal) {
            if (g != center) {
                others.push_back(g);
            }
        }
        mark_calibrated(state, others);
        const std::vector<ElementId> p{center};
        const auto constraints = build_constraints(state, p);
        bool has_edge = false;
        bool has_node = false;
        for (ElementId r : constraints) {
            (state.graph->element(r).is_node() ? has_node : has_edge) = true;
            CHECK(state.graph->distance(center, r).within(config.d_r));
        }
        CHECK(has_node);
        CHECK(has_edge);
    }
}

TEST_CASE("calibrate_element") {
    SUBCASE("1x1 grid, one step of dimension 1") {
        CalibrationState state = make_state(grid_config(1, 1, 4));
        const StepRecord record = calibrate_element(state, 0);
        CHECK(record.parameter_count == 1);
        CHECK(record.constraint_count == 0);
        CHECK(state.complete());
        CHECK(state.status.size() == 1);
        CHECK(state.freq_index(0) >= 0);
    }
    SUBCASE("fresh 3x3 center: 5 parameters, 0 constraints") {
        CalibrationState state = make_state(grid_config(3, 3));
        const ElementId center = *state.graph->find_node(1, 1);
        const StepRecord record = calibrate_element(state, center);
        CHECK(record.parameter_count == 5);
        CHECK(record.constraint_count == 0);
        CHECK(state.status.size() == 5);  // the whole parameter set joins P*
    }
    SUBCASE("a second adjacent step sees constraints") {
        CalibrationState state = make_state(grid_config(3, 3));
        const ElementId center = *state.graph->find_node(1, 1);
        calibrate_element(state, center);
        const StepRecord second = calibrate_element(state, *state.graph->find_node(0, 1));
        CHECK(second.constraint_count >= 1);
    }
    SUBCASE("infeasible step leaves the state untouched") {
        RunConfig config;
        config.rows = 1;
        config.cols = 2;
        config.k = 1;
        config.algorithm = AlgorithmMode::kUnstructured;
        config.delta_hard = 0.5;
        config.d_p = 2;  // both nodes in one step, hard-conflicting at k = 1
        validate_and_resolve(config);
        CalibrationState state = make_state(config);
        CHECK_THROWS_AS(calibrate_element(state, 0), InfeasibleStepError);
        CHECK(state.status.empty());
        CHECK(state.step_log.empty());
        CHECK(state.next_step == 0);
        CHECK_FALSE(state.is_calibrated(0));
    }
}

TEST_CASE("calibrate_thread") {
    SUBCASE("calibrated seed is a no-op") {
        CalibrationState state = make_state(grid_config(2, 2));
        mark_calibrated(state, {0});
        const std::size_t before = state.status.size();
        calibrate_thread(state, 0);
        CHECK(state.status.size() == before);
    }
    SUBCASE("one node seed calibrates the whole fresh 4x4 goal") {
        CalibrationState state = make_state(grid_config(4, 4));
        calibrate_thread(state, 0);
        check_complete_run(state);
    }
    SUBCASE("d_t = 0 confines the thread to the seed's parameter set") {
        RunConfig config = grid_config(3, 3);
        config.d_t = 0;
        CalibrationState state = make_state(config);
        calibrate_thread(state, 0);
        CHECK(state.status.size() == build_parameters(make_state(config), 0).size());
    }
}

TEST_CASE("calibrate_graph") {
    SUBCASE("complete status returns immediately") {
        CalibrationState state = make_state(grid_config(2, 2));
        calibrate_graph(state);
        const auto db_before = state.database;
        const RunSummary summary = calibrate_graph(state);
        CHECK(summary.subgoals == 0);
        CHECK(summary.steps == 0);
        CHECK(state.database == db_before);
    }
    SUBCASE("d_p = 0: one step per element") {
        RunConfig config = grid_config(4, 4, 50);
        config.d_p = 0;
        CalibrationState state = make_state(config);
        calibrate_graph(state);
        check_complete_run(state);
        CHECK(state.step_log.size() == 40);
        for (const StepRecord& r : state.step_log) {
            CHECK(r.parameter_count == 1);
        }
    }
    SUBCASE("d_p spanning the graph: a single step") {
        RunConfig config;
        config.rows = 2;
        config.cols = 2;
        config.k = 3;
        config.heuristic = Heuristic::kInsertionOrder;
        config.algorithm = AlgorithmMode::kUnstructured;
        config.d_p = 8;
        config.delta_hard = 1.0;
        config.d_hard = 1;
        validate_and_resolve(config);
        CalibrationState state = make_state(config);
        calibrate_graph(state);
        check_complete_run(state);
        REQUIRE(state.step_log.size() == 1);
        CHECK(state.step_log[0].parameter_count == 8);
    }
    SUBCASE("dimension bounds at d_p = 1") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            RunConfig config = grid_config(4, 4);
            config.heuristic = Heuristic::kRandom;
            config.seed = seed;
            CalibrationState state = make_state(config);
            calibrate_graph(state);
            check_complete_run(state);
            for (const StepRecord& r : state.step_log) {
                CHECK(r.parameter_count >= 1);
                CHECK(r.parameter_count <= 5);
            }
            CHECK(state.step_log.size() >= state.goal.size() / 5);
            CHECK(state.step_log.size() <= state.goal.size());
        }
    }
    SUBCASE("parameter counts sum to the goal size") {
        CalibrationState state = make_state(grid_config(4, 4));
        calibrate_graph(state);
        int total = 0;
        for (const StepRecord& r : state.step_log) {
            total += r.parameter_count;
        }
        CHECK(total == static_cast<int>(state.goal.size()));
    }
    SUBCASE("completion holds even when d_p exceeds d_t") {
        RunConfig config = grid_config(4, 4);
        config.d_p = 4;
        config.d_t = 2;
        validate_and_resolve(config);
        CalibrationState state = make_state(config);
        calibrate_graph(state);
        check_complete_run(state);
    }
}

TEST_CASE("an infeasible subgoal aborts with partial progress kept") {
    // Known-infeasible instance: at k=20 the last nodes of this run face
    // eight calibrated king-neighbors whose values tile every option.
    RunConfig config = grid_config(4, 4, 20);
    config.heuristic = Heuristic::kRandom;
    config.seed = 42;
    validate_and_resolve(config);
    CalibrationState state = make_state(config);
    try {
        calibrate_graph(state);
        // Feasibility here would mean the fixture seed no longer reproduces
        // an abort; pick a new seed if the model constants ever change.
        FAIL("expected CalibrationAborted");
    } catch (const CalibrationAborted& e) {
        REQUIRE(e.failed_subgoals() == std::vector<int>{0});
        CHECK(std::string(e.what()).find("infeasible step") != std::string::npos);
    }
    CHECK_FALSE(state.complete());
    CHECK(state.status.size() > 0);
    CHECK(state.status.size() == snapshot_database(state).records.size());

    // Whatever was calibrated still respects every hard bound pairwise.
    const double delta = config.delta_hard;
    const FrequencyDomain domain = config.domain();
    for (const StatusEntry& a : state.status) {
        for (const StatusEntry& b : state.status) {
            if (a.element >= b.element) {
                continue;
            }
            if (!state.activity->co_active(a.element, b.element)) {
                continue;
            }
            if (!state.graph->distance_within(a.element, b.element, config.d_hard)
                     .within(config.d_hard)) {
                continue;
            }
            CHECK(index_detuning(domain, state.freq_index(a.element),
                                 state.freq_index(b.element)) >= delta);
        }
    }
}

TEST_CASE("serial and parallel runs are identical") {
    RunConfig config = grid_config(3, 7);
    config.heuristic = Heuristic::kRandom;
    config.seed = 17;

    CalibrationState serial = make_state(config);
    mark_calibrated(serial, column_slice(serial, 2, 4));
    CalibrationState parallel = serial;
    parallel.config.parallel = true;

    REQUIRE(build_calibration_subgoals(serial).size() == 2);
    const RunSummary s1 = calibrate_graph(serial);
    const RunSummary s2 = calibrate_graph(parallel);
    CHECK(s1.subgoals == s2.subgoals);
    CHECK(s1.steps == s2.steps);
    CHECK(serial.database == parallel.database);
    CHECK(serial.status.size() == parallel.status.size());
    for (std::size_t i = 0; i < serial.status.size(); ++i) {
        CHECK(serial.status[i].element == parallel.status[i].element);
        CHECK(serial.status[i].step == parallel.status[i].step);
    }
    CHECK(serialize_database(snapshot_database(serial)) ==
          serialize_database(snapshot_database(parallel)));
}

TEST_CASE("recalibrate") {
    SUBCASE("d_disc = 0 re-optimizes only the expired element") {
        RunConfig config = grid_config(3, 3);
        CalibrationState state = make_state(config);
        calibrate_graph(state);
        const auto before = state.database;
        const ElementId center = *state.graph->find_node(1, 1);
        recalibrate(state, center, 0);
        check_complete_run(state);
        for (ElementId g : state.goal) {
            if (g != center) {
                CHECK(state.database[static_cast<std::size_t>(g)].freq_index ==
                      before[static_cast<std::size_t>(g)].freq_index);
            }
        }
    }
    SUBCASE("5x5 center discard at d_disc = 2 covers 13 elements") {
        RunConfig config = grid_config(5, 5);
        config.d_r = 2;  // d_disc defaults to d_r
        validate_and_resolve(config);
        CalibrationState state = make_state(config);
        calibrate_graph(state);
        const auto before = state.database;
        const int steps_before = state.next_step;

        const ElementId center = *state.graph->find_node(2, 2);
        recalibrate(state, center);
        check_complete_run(state);

        // The discarded set is exactly X^2(center) within the goal.
        std::set<ElementId> discarded;
        for (ElementId h : state.graph->connectivity_subgraph(center, 2)) {
            if (state.goal_contains(h)) {
                discarded.insert(h);
            }
        }
        CHECK(discarded.size() == 13);
        int re_optimized = 0;
        for (ElementId g : state.goal) {
            const bool touched = state.database[static_cast<std::size_t>(g)].step >= steps_before;
            if (discarded.count(g) != 0) {
                re_optimized += touched ? 1 : 0;
            } else {
                CHECK(state.database[static_cast<std::size_t>(g)].freq_index ==
                      before[static_cast<std::size_t>(g)].freq_index);
            }
        }
        CHECK(re_optimized == 13);

        // Still globally feasible.
        CHECK(validate(state, assignment_from_state(state)).empty());
    }
    SUBCASE("expired element must be calibrated") {
        CalibrationState state = make_state(grid_config(2, 2));
        CHECK_THROWS_AS(recalibrate(state, 0, 0), ContractViolation);
    }
}

TEST_CASE("stitch joins independently calibrated halves") {
    RunConfig config = grid_config(3, 5);
    config.seed = 23;

    CalibrationState full = make_state(config);
    CalibrationState left = make_state(config, column_slice(full, 0, 1));
    CalibrationState right = make_state(config, column_slice(full, 3, 4));
    calibrate_graph(left);
    calibrate_graph(right);

    std::vector<RestoredRecord> imported;
    for (const CalibrationState* half : {&left, &right}) {
        for (ElementId g : half->goal) {
            imported.push_back(RestoredRecord{
                g, half->freq_index(g), static_cast<int>(imported.size()), 0.0});
        }
    }
    restore_status(full, imported);

    const std::size_t seam = full.goal.size() - left.goal.size() - right.goal.size();
    REQUIRE(seam > 0);

    SUBCASE("seam is calibrated under boundary constraints; halves unchanged") {
        stitch(full);
        check_complete_run(full);
        for (const CalibrationState* half : {&left, &right}) {
            for (ElementId g : half->goal) {
                CHECK(full.freq_index(g) == half->freq_index(g));
            }
        }
        CHECK(validate(full, assignment_from_state(full)).empty());
        // Boundary constraints were actually applied.
        bool constrained = false;
        for (const StepRecord& r : full.step_log) {
            constrained = constrained || r.constraint_count > 0;
        }
        CHECK(constrained);
    }
    SUBCASE("stitching a complete state is a no-op") {
        stitch(full);
        const auto db = full.database;
        const RunSummary summary = stitch(full);
        CHECK(summary.steps == 0);
        CHECK(full.database == db);
    }
}

}  // TEST_SUITE
