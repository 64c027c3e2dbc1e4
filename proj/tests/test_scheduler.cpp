#include <doctest.h>

#include <algorithm>
#include <set>

#include "snake/engine.hpp"
#include "snake/errors.hpp"
#include "snake/rng.hpp"
#include "snake/scheduler.hpp"
#include "snake/state.hpp"

using namespace snake;

namespace {

RunConfig base_config(int rows, int cols) {
    RunConfig config;
    config.rows = rows;
    config.cols = cols;
    config.k = 20;
    config.heuristic = Heuristic::kInsertionOrder;
    validate_and_resolve(config);
    return config;
}

// Marks the given elements calibrated with synthetic values.
void mark_calibrated(CalibrationState& state, const std::vector<ElementId>& elements) {
    std::vector<RestoredRecord> records;
    int step = state.next_step;
    for (ElementId g : elements) {
        records.push_back(RestoredRecord{g, 0, step++, 0.0});
    }
    restore_status(state, records);
}

std::vector<ElementId> column_band(const CalibrationState& state, int col_lo, int col_hi) {
    std::vector<ElementId> out;
    const ProcessorGraph& g = *state.graph;
    for (ElementId id : state.goal) {
        const GraphElement& e = g.element(id);
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
            out.push_back(id);
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("scheduler") {

TEST_CASE("options are empty in a fully calibrated neighborhood") {
    CalibrationState state = make_state(base_config(3, 3));
    std::vector<ElementId> others;
    for (ElementId g : state.goal) {
        if (g != 4) {
            others.push_back(g);
        }
    }
    mark_calibrated(state, others);
    CHECK(build_traversal_options(state, 4).empty());
}

TEST_CASE("central node of a fresh 3x3 grid sees 8 candidate nodes at d_t=4") {
    CalibrationState state = make_state(base_config(3, 3));
    const ElementId center = *state.graph->find_node(1, 1);
    const std::vector<ElementId> options = build_traversal_options(state, center);
    CHECK(options.size() == 8);  // 4 lattice neighbors + 4 diagonal neighbors
    for (ElementId h : options) {
        CHECK(state.graph->element(h).is_node());
        CHECK(state.graph->distance(center, h).steps() <= 4);
    }
}

TEST_CASE("edge options stay within the same xeb pattern") {
    CalibrationState state = make_state(base_config(4, 4));
    const ElementId n11 = *state.graph->find_node(1, 1);
    const ElementId n21 = *state.graph->find_node(2, 1);
    const ElementId edge = *state.graph->find_edge(n11, n21);
    const std::vector<ElementId> options = build_traversal_options(state, edge);
    CHECK_FALSE(options.empty());
    for (ElementId h : options) {
        const GraphElement& e = state.graph->element(h);
        CHECK(e.is_engineered());
        CHECK(state.activity->co_active(edge, h));
        // Co-activity within one pattern implies no shared endpoint.
        CHECK_FALSE(e.has_endpoint(n11));
        CHECK_FALSE(e.has_endpoint(n21));
    }
}

TEST_CASE("traversal membership is symmetric under arbitrary partial status") {
    RunConfig config = base_config(4, 4);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        CalibrationState state = make_state(config);
        Rng rng(seed);
        std::vector<ElementId> some;
        for (ElementId g : state.goal) {
            if (rng.next_double() < 0.4) {
                some.push_back(g);
            }
        }
        mark_calibrated(state, some);
        for (ElementId g : state.uncalibrated_goal()) {
            for (ElementId h : build_traversal_options(state, g)) {
                const std::vector<ElementId> back = build_traversal_options(state, h);
                CHECK(std::find(back.begin(), back.end(), g) != back.end());
            }
        }
    }
}

TEST_CASE("heuristics order the same candidate set") {
    RunConfig config = base_config(4, 4);
    CalibrationState state = make_state(config);
    const ElementId center = *state.graph->find_node(1, 1);

    const std::vector<ElementId> insertion = build_traversal_options(state, center);
    CHECK(std::is_sorted(insertion.begin(), insertion.end()));

    config.heuristic = Heuristic::kRandom;
    CalibrationState random_state = make_state(config);
    const std::vector<ElementId> shuffled = build_traversal_options(random_state, center);
    const std::vector<ElementId> shuffled_again = build_traversal_options(random_state, center);
    CHECK(shuffled == shuffled_again);  // deterministic given the run seed
    std::vector<ElementId> sorted = shuffled;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == insertion);  // same membership

    config.heuristic = Heuristic::kMostCalibratedNeighbors;
    CalibrationState mcn_state = make_state(config);
    // Calibrate the corner; candidates near it sort first, counts descending,
    // ids breaking ties.
    mark_calibrated(mcn_state, {*mcn_state.graph->find_node(0, 0)});
    const std::vector<ElementId> greedy = build_traversal_options(mcn_state, center);
    auto count_calibrated = [&](ElementId h) {
        int count = 0;
        for (const Neighbor& nb : mcn_state.graph->neighborhood(h, mcn_state.config.d_r)) {
            if (nb.id != h && mcn_state.is_calibrated(nb.id)) {
                ++count;
            }
        }
        return count;
    };
    for (std::size_t i = 1; i < greedy.size(); ++i) {
        const int prev = count_calibrated(greedy[i - 1]);
        const int cur = count_calibrated(greedy[i]);
        CHECK(prev >= cur);
        if (prev == cur) {
            CHECK(greedy[i - 1] < greedy[i]);
        }
    }
    CHECK(greedy[0] == *mcn_state.graph->find_node(0, 1));
}

TEST_CASE("fresh 4x4 grid forms a single subgoal of all 40 elements") {
    CalibrationState state = make_state(base_config(4, 4));
    const auto subgoals = build_calibration_subgoals(state);
    REQUIRE(subgoals.size() == 1);
    CHECK(subgoals[0].members.size() == 40);
}

TEST_CASE("complete status yields no subgoals") {
    CalibrationState state = make_state(base_config(3, 3));
    std::vector<ElementId> everything(state.goal);
    mark_calibrated(state, everything);
    CHECK(build_calibration_subgoals(state).empty());
}

TEST_CASE("a calibrated band wider than d_r separates two subgoals") {
    CalibrationState state = make_state(base_config(3, 7));
    mark_calibrated(state, column_band(state, 2, 4));
    const auto subgoals = build_calibration_subgoals(state);
    REQUIRE(subgoals.size() == 2);
    // Partition of the uncalibrated elements.
    std::vector<ElementId> covered;
    for (const auto& sg : subgoals) {
        covered.insert(covered.end(), sg.members.begin(), sg.members.end());
    }
    std::sort(covered.begin(), covered.end());
    CHECK(covered == state.uncalibrated_goal());
    // No interference across subgoals.
    for (ElementId a : subgoals[0].members) {
        for (ElementId b : subgoals[1].members) {
            const bool interferes =
                state.graph->distance(a, b).within(state.config.d_r) &&
                state.activity->co_active(a, b);
            CHECK_FALSE(interferes);
        }
    }
}

TEST_CASE("subgoals partition the uncalibrated goal for random status") {
    RunConfig config = base_config(4, 5);
    for (std::uint64_t seed : {11ull, 22ull, 33ull, 44ull}) {
        CalibrationState state = make_state(config);
        Rng rng(seed);
        std::vector<ElementId> some;
        for (ElementId g : state.goal) {
            if (rng.next_double() < 0.5) {
                some.push_back(g);
            }
        }
        mark_calibrated(state, some);
        const auto subgoals = build_calibration_subgoals(state);
        std::vector<ElementId> covered;
        for (const auto& sg : subgoals) {
            covered.insert(covered.end(), sg.members.begin(), sg.members.end());
        }
        std::sort(covered.begin(), covered.end());
        CHECK(std::adjacent_find(covered.begin(), covered.end()) == covered.end());
        CHECK(covered == state.uncalibrated_goal());
    }
}

TEST_CASE("fresh 4x4 subgoal splits into 1 node thread and 4 edge threads") {
    CalibrationState state = make_state(base_config(4, 4));
    const auto subgoals = build_calibration_subgoals(state);
    REQUIRE(subgoals.size() == 1);
    const auto threads = build_traversal_threads(state, subgoals[0]);
    REQUIRE(threads.size() == 5);

    int node_threads = 0;
    int edge_threads = 0;
    std::vector<ElementId> covered;
    for (const auto& thread : threads) {
        REQUIRE_FALSE(thread.members.empty());
        const ElementKind kind = state.graph->element(thread.members.front()).kind;
        for (ElementId m : thread.members) {
            CHECK(state.graph->element(m).kind == kind);  // single-kind threads
        }
        (kind == ElementKind::kNode ? node_threads : edge_threads) += 1;
        covered.insert(covered.end(), thread.members.begin(), thread.members.end());
    }
    CHECK(node_threads == 1);
    CHECK(edge_threads == 4);
    std::sort(covered.begin(), covered.end());
    CHECK(covered == subgoals[0].members);  // threads partition the subgoal
}

TEST_CASE("d_t = 0 makes every element its own thread") {
    RunConfig config = base_config(3, 3);
    config.d_t = 0;
    validate_and_resolve(config);
    CalibrationState state = make_state(config);
    const auto subgoals = build_calibration_subgoals(state);
    std::size_t total_threads = 0;
    for (const auto& sg : subgoals) {
        const auto threads = build_traversal_threads(state, sg);
        for (const auto& t : threads) {
            CHECK(t.members.size() == 1);
        }
        total_threads += threads.size();
    }
    CHECK(total_threads == state.goal.size());
}

TEST_CASE("thread seeds") {
    CalibrationState state = make_state(base_config(2, 2));
    SUBCASE("lexicographic minimum by default") {
        TraversalThread thread;
        thread.members = {*state.graph->find_node(0, 0), *state.graph->find_node(0, 1)};
        CHECK(build_traversal_seed(state, thread) == *state.graph->find_node(0, 0));
    }
    SUBCASE("singleton thread") {
        TraversalThread thread;
        thread.members = {3};
        CHECK(build_traversal_seed(state, thread) == 3);
    }
    SUBCASE("random heuristic is reproducible") {
        RunConfig config = base_config(4, 4);
        config.heuristic = Heuristic::kRandom;
        CalibrationState rstate = make_state(config);
        TraversalThread thread;
        thread.members = rstate.goal;
        const ElementId first = build_traversal_seed(rstate, thread);
        CHECK(build_traversal_seed(rstate, thread) == first);
        CHECK(std::find(thread.members.begin(), thread.members.end(), first) !=
              thread.members.end());
    }
    SUBCASE("empty thread is rejected") {
        TraversalThread thread;
        CHECK_THROWS_AS(build_traversal_seed(state, thread), ContractViolation);
    }
}

}  // TEST_SUITE
