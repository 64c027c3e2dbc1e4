#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "snake/engine.hpp"
#include "snake/errors.hpp"
#include "snake/oracle.hpp"
#include "snake/state.hpp"

using namespace snake;

namespace {

// Unresolved on purpose: tests set their overrides (small k usually needs an
// explicit delta_hard) and then call validate_and_resolve themselves.
RunConfig oracle_config(int rows, int cols, int k) {
    RunConfig config;
    config.rows = rows;
    config.cols = cols;
    config.k = k;
    config.heuristic = Heuristic::kInsertionOrder;
    return config;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("total error of a 1x1 grid is the node curve") {
    RunConfig config = oracle_config(1, 1, 5);
    config.seed = 9;
    validate_and_resolve(config);
    CalibrationState state = make_state(config);
    const ModelParams params = model_params(config);
    for (int v = 0; v < config.k; ++v) {
        const GlobalAssignment assignment{{v}};
        CHECK(total_system_error(state, assignment) ==
              element_error(*state.graph, 0, config.domain().value(v), *state.landscape, params));
    }
}

TEST_CASE("co-active nodes beyond d_r contribute no pair term") {
    RunConfig config = oracle_config(1, 7, 6);
    validate_and_resolve(config);
    CalibrationState full = make_state(config);
    const ElementId a = *full.graph->find_node(0, 0);
    const ElementId b = *full.graph->find_node(0, 6);
    CHECK(full.graph->distance(a, b).steps() == 12);

    CalibrationState state = make_state(config, {a, b});
    const ModelParams params = model_params(config);
    const GlobalAssignment assignment{{2, 2}};  // equal values; far apart, so feasible
    const double expected =
        element_error(*state.graph, a, config.domain().value(2), *state.landscape, params) +
        element_error(*state.graph, b, config.domain().value(2), *state.landscape, params);
    CHECK(total_system_error(state, assignment) == expected);
}

TEST_CASE("hard violations drive the total to the infinity sentinel") {
    RunConfig config = oracle_config(1, 2, 8);
    validate_and_resolve(config);
    CalibrationState state = make_state(config);
    const GlobalAssignment same{{3, 3, 3}};  // two adjacent nodes plus their edge
    CHECK(std::isinf(total_system_error(state, same)));
}

TEST_CASE("incomplete assignments are rejected") {
    RunConfig incomplete_config = oracle_config(2, 2, 4);
    validate_and_resolve(incomplete_config);
    CalibrationState state = make_state(incomplete_config);
    CHECK_THROWS_AS(total_system_error(state, GlobalAssignment{{0, 1}}), ContractViolation);
    CHECK_THROWS_AS(assignment_from_state(state), ContractViolation);
}

TEST_CASE("brute force on a 1x1 grid picks the best of k options") {
    RunConfig config = oracle_config(1, 1, 5);
    config.seed = 31;
    validate_and_resolve(config);
    CalibrationState state = make_state(config);
    const BruteForceResult result = global_brute_force(state, 100);

    double best = 1e18;
    int best_v = -1;
    for (int v = 0; v < 5; ++v) {
        const double err = total_system_error(state, GlobalAssignment{{v}});
        if (err < best) {
            best = err;
            best_v = v;
        }
    }
    CHECK(result.assignment.indices[0] == best_v);
    CHECK(result.error == best);
}

TEST_CASE("brute force agrees with a naive odometer on a 4-node path") {
    RunConfig config = oracle_config(1, 4, 3);
    config.seed = 5;
    config.delta_hard = 0.4;
    validate_and_resolve(config);
    CalibrationState full = make_state(config);
    std::vector<ElementId> nodes;
    for (const GraphElement& e : full.graph->elements()) {
        if (e.is_node()) {
            nodes.push_back(e.id);
        }
    }
    CalibrationState state = make_state(config, nodes);
    const BruteForceResult result = global_brute_force(state, 100);

    // Naive enumeration of all 3^4 = 81 assignments through the public
    // functional only.
    GlobalAssignment probe{{0, 0, 0, 0}};
    double best = 1e18;
    GlobalAssignment best_assignment = probe;
    int evaluated = 0;
    while (true) {
        const double err = total_system_error(state, probe);
        ++evaluated;
        if (err < best) {
            best = err;
            best_assignment = probe;
        }
        int pos = 3;
        while (pos >= 0 && ++probe.indices[static_cast<std::size_t>(pos)] == 3) {
            probe.indices[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) {
            break;
        }
    }
    CHECK(evaluated == 81);
    CHECK(result.assignment.indices == best_assignment.indices);
    CHECK(result.error == best);
}

TEST_CASE("brute force refuses oversized search spaces") {
    RunConfig config = oracle_config(2, 2, 3);
    config.delta_hard = 0.5;
    validate_and_resolve(config);
    CalibrationState state = make_state(config);  // |goal| = 8, 3^8 = 6561
    CHECK_THROWS_AS(global_brute_force(state, 10), BudgetExceeded);
    try {
        global_brute_force(state, 10);
    } catch (const BudgetExceeded& e) {
        CHECK(e.budget() == 10);
        CHECK(e.required() > 10.0L);
    }
}

TEST_CASE("validator") {
    RunConfig config = oracle_config(2, 2, 10);
    validate_and_resolve(config);
    CalibrationState state = make_state(config);
    SUBCASE("well-separated assignment is clean") {
        // Nodes pairwise >= 2 grid steps apart; edges unconstrained under xeb.
        GlobalAssignment assignment;
        assignment.indices.assign(state.goal.size(), 0);
        for (std::size_t i = 0; i < state.goal.size(); ++i) {
            const GraphElement& e = state.graph->element(state.goal[i]);
            assignment.indices[i] = e.is_node() ? static_cast<int>(2 * i) : 9;
        }
        CHECK(validate(state, assignment).empty());
    }
    SUBCASE("two adjacent co-active nodes forced equal: exactly one violation") {
        GlobalAssignment assignment;
        for (ElementId g : state.goal) {
            const GraphElement& e = state.graph->element(g);
            if (!e.is_node()) {
                assignment.indices.push_back(0);
            } else if (e.row == 0) {
                assignment.indices.push_back(5);  // n(0,0) and n(0,1) collide
            } else {
                assignment.indices.push_back(e.col == 0 ? 0 : 9);
            }
        }
        const auto violations = validate(state, assignment);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].a == *state.graph->find_node(0, 0));
        CHECK(violations[0].b == *state.graph->find_node(0, 1));
        CHECK(violations[0].detuning == 0.0);
    }
}

TEST_CASE("snake output is feasible and never beats the oracle") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        RunConfig config = oracle_config(2, 2, 4);
        config.heuristic = Heuristic::kRandom;
        config.seed = seed;
        config.delta_hard = 0.5;  // one grid step at k = 4
        validate_and_resolve(config);

        CalibrationState state = make_state(config);
        calibrate_graph(state);
        const GlobalAssignment snake_assignment = assignment_from_state(state);
        CHECK(validate(state, snake_assignment).empty());
        const double snake_error = total_system_error(state, snake_assignment);
        CHECK(std::isfinite(snake_error));

        const BruteForceResult oracle = global_brute_force(state, 1u << 20);
        CHECK(snake_error >= oracle.error);
    }
}

TEST_CASE("single-step snake equals the oracle") {
    RunConfig config = oracle_config(2, 2, 3);
    config.algorithm = AlgorithmMode::kUnstructured;
    config.d_p = 8;
    config.d_hard = 1;
    config.delta_hard = 1.0;
    config.seed = 2;
    validate_and_resolve(config);

    CalibrationState state = make_state(config);
    calibrate_graph(state);
    REQUIRE(state.step_log.size() == 1);
    const GlobalAssignment snake_assignment = assignment_from_state(state);
    const BruteForceResult oracle = global_brute_force(state, config.budget);
    CHECK(snake_assignment.indices == oracle.assignment.indices);
    CHECK(total_system_error(state, snake_assignment) == oracle.error);
}

}  // TEST_SUITE
