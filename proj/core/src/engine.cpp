#include "snake/engine.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <optional>
#include <sstream>

#include "snake/errors.hpp"
#include "snake/rng.hpp"

namespace snake {
namespace {

constexpr std::uint64_t kStepTag = 0x53544550ull;  // "STEP"

// RNG stream of one optimization step, keyed by structure rather than by any
// global counter so that parallel subgoal execution cannot perturb it.
std::uint64_t step_seed(const CalibrationState& state, int subgoal_ordinal, int local_step) {
    return Rng::keyed({state.config.seed, kStepTag, static_cast<std::uint64_t>(subgoal_ordinal),
                       static_cast<std::uint64_t>(local_step)})
        .next_u64();
}

StepRecord run_step(CalibrationState& state, ElementId g, int subgoal_ordinal, int local_step) {
    const std::vector<ElementId> params = build_parameters(state, g);
    const std::vector<ElementId> constraints = build_constraints(state, params);

    CalibrationData data;
    data.landscape = state.landscape.get();
    for (ElementId r : constraints) {
        data.fixed_indices.emplace(r, state.freq_index(r));
    }

    const LocalObjective objective =
        build_error_model(params, constraints, data, *state.graph, *state.activity,
                          state.config.d_r, state.config.domain(), model_params(state.config));
    const OptimizeResult result =
        optimize_error_model(objective, state.config.budget, state.config.n_restarts,
                             step_seed(state, subgoal_ordinal, local_step));

    // Commit. Everything above is read-only, so an InfeasibleStepError from
    // the optimizer leaves the state untouched.
    const int step = state.next_step++;
    const std::span<const ElementId> ordered = objective.parameters();
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const ElementId p = ordered[i];
        state.calibrated[static_cast<std::size_t>(p)] = 1;
        state.database[static_cast<std::size_t>(p)] =
            DbEntry{result.assignment[i], step, result.value};
        state.status.push_back(StatusEntry{p, step});
    }
    StepRecord record;
    record.step = step;
    record.central = g;
    record.parameter_count = static_cast<int>(ordered.size());
    record.constraint_count = static_cast<int>(constraints.size());
    record.value = result.value;
    state.step_log.push_back(record);
    return record;
}

void run_thread(CalibrationState& state, ElementId seed, int subgoal_ordinal, int base_step) {
    std::deque<ElementId> frontier{seed};
    const bool depth_first = state.config.traversal_order == TraversalOrder::kDepthFirst;
    while (!frontier.empty()) {
        ElementId g;
        if (depth_first) {
            g = frontier.back();
            frontier.pop_back();
        } else {
            g = frontier.front();
            frontier.pop_front();
        }
        if (state.is_calibrated(g)) {
            continue;
        }
        run_step(state, g, subgoal_ordinal, state.next_step - base_step);
        const std::vector<ElementId> options = build_traversal_options(state, g);
        if (depth_first) {
            // Reversed push keeps the first option on top of the stack, which
            // reproduces the recursive option order.
            for (auto it = options.rbegin(); it != options.rend(); ++it) {
                frontier.push_back(*it);
            }
        } else {
            for (ElementId option : options) {
                frontier.push_back(option);
            }
        }
    }
}

struct SubgoalOutcome {
    CalibrationState state;                       // worker copy after the run
    std::optional<InfeasibleStepError> failure;   // set when the subgoal aborted
};

// Runs one subgoal to completion on a private copy of the base state. Seeds
// every thread once; if by-product calibration leaves stragglers that no
// remaining seed can reach (possible when d_p exceeds d_t), re-segments the
// remainder and continues.
SubgoalOutcome run_subgoal(const CalibrationState& base, const CalibrationSubgoal& subgoal,
                           std::vector<TraversalThread> threads) {
    SubgoalOutcome outcome{base, std::nullopt};
    CalibrationState& state = outcome.state;
    const int base_step = state.next_step;
    try {
        while (true) {
            for (const TraversalThread& thread : threads) {
                const bool done = std::all_of(
                    thread.members.begin(), thread.members.end(),
                    [&](ElementId m) { return state.is_calibrated(m); });
                if (done) {
                    continue;
                }
                run_thread(state, thread.seed, subgoal.id, base_step);
            }
            CalibrationSubgoal remainder;
            remainder.id = subgoal.id;
            for (ElementId m : subgoal.members) {
                if (!state.is_calibrated(m)) {
                    remainder.members.push_back(m);
                }
            }
            if (remainder.members.empty()) {
                break;
            }
            threads = build_traversal_threads(state, remainder);
        }
    } catch (const InfeasibleStepError& e) {
        outcome.failure = e;
    }
    return outcome;
}

// Appends a worker's new progress onto the master state, renumbering the
// worker's step indices into the master sequence.
void merge_outcome(CalibrationState& master, const CalibrationState& worker,
                   std::size_t base_status_size, int base_step) {
    const int offset = master.next_step - base_step;
    for (std::size_t i = base_status_size; i < worker.status.size(); ++i) {
        const StatusEntry entry = worker.status[i];
        const DbEntry db = worker.database[static_cast<std::size_t>(entry.element)];
        master.calibrated[static_cast<std::size_t>(entry.element)] = 1;
        master.database[static_cast<std::size_t>(entry.element)] =
            DbEntry{db.freq_index, db.step + offset, db.objective};
        master.status.push_back(StatusEntry{entry.element, entry.step + offset});
    }
    for (const StepRecord& record : worker.step_log) {
        if (record.step < base_step) {
            continue;
        }
        StepRecord shifted = record;
        shifted.step += offset;
        master.step_log.push_back(shifted);
    }
    master.next_step += worker.next_step - base_step;
}

}  // namespace

std::vector<ElementId> build_parameters(const CalibrationState& state, ElementId g) {
    if (!state.goal_contains(g)) {
        throw ContractViolation("central element is outside the calibration goal");
    }
    if (state.is_calibrated(g)) {
        throw ContractViolation("central element is already calibrated");
    }
    std::vector<ElementId> params;
    for (ElementId h : state.graph->connectivity_subgraph(g, state.config.d_p)) {
        if (state.goal_contains(h) && !state.is_calibrated(h)) {
            params.push_back(h);
        }
    }
    return params;  // sorted; contains g
}

std::vector<ElementId> build_constraints(const CalibrationState& state,
                                         std::span<const ElementId> params) {
    if (params.empty()) {
        throw ContractViolation("constraints need a nonempty parameter set");
    }
    std::vector<ElementId> constraints;
    for (ElementId g : params) {
        for (const Neighbor& nb : state.graph->neighborhood(g, state.config.d_r)) {
            if (!state.is_calibrated(nb.id)) {
                continue;
            }
            if (!state.activity->co_active(g, nb.id)) {
                continue;
            }
            constraints.push_back(nb.id);
        }
    }
    std::sort(constraints.begin(), constraints.end());
    constraints.erase(std::unique(constraints.begin(), constraints.end()), constraints.end());
    return constraints;
}

StepRecord calibrate_element(CalibrationState& state, ElementId g) {
    return run_step(state, g, 0, state.next_step);
}

void calibrate_thread(CalibrationState& state, ElementId seed) {
    run_thread(state, seed, 0, state.next_step);
}

RunSummary calibrate_graph(CalibrationState& state) {
    RunSummary summary;
    const std::vector<CalibrationSubgoal> subgoals = build_calibration_subgoals(state);
    summary.subgoals = static_cast<int>(subgoals.size());
    if (subgoals.empty()) {
        return summary;
    }

    std::vector<std::vector<TraversalThread>> threads_per_subgoal;
    threads_per_subgoal.reserve(subgoals.size());
    for (const CalibrationSubgoal& sg : subgoals) {
        std::vector<TraversalThread> threads = build_traversal_threads(state, sg);
        for (const TraversalThread& t : threads) {
            if (state.graph->element(t.members.front()).is_node()) {
                ++summary.node_threads;
            } else {
                ++summary.edge_threads;
            }
        }
        threads_per_subgoal.push_back(std::move(threads));
    }

    const std::size_t base_status_size = state.status.size();
    const int base_step = state.next_step;
    const int steps_before = static_cast<int>(state.step_log.size());

    std::vector<SubgoalOutcome> outcomes;
    outcomes.reserve(subgoals.size());
    if (state.config.parallel && subgoals.size() > 1) {
        std::vector<std::future<SubgoalOutcome>> futures;
        futures.reserve(subgoals.size());
        for (std::size_t i = 0; i < subgoals.size(); ++i) {
            futures.push_back(std::async(std::launch::async, [&, i] {
                return run_subgoal(state, subgoals[i], threads_per_subgoal[i]);
            }));
        }
        for (auto& f : futures) {
            outcomes.push_back(f.get());
        }
    } else {
        for (std::size_t i = 0; i < subgoals.size(); ++i) {
            outcomes.push_back(run_subgoal(state, subgoals[i], threads_per_subgoal[i]));
        }
    }

    std::vector<int> failed;
    std::ostringstream failure_report;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        merge_outcome(state, outcomes[i].state, base_status_size, base_step);
        if (outcomes[i].failure.has_value()) {
            failed.push_back(subgoals[i].id);
            failure_report << (failed.size() > 1 ? "; " : "") << "subgoal " << subgoals[i].id
                           << ": " << outcomes[i].failure->what();
        }
    }
    summary.steps = static_cast<int>(state.step_log.size()) - steps_before;
    if (!failed.empty()) {
        throw CalibrationAborted(failed, "calibration aborted on " +
                                             std::to_string(failed.size()) + " subgoal(s): " +
                                             failure_report.str());
    }
    return summary;
}

RunSummary recalibrate(CalibrationState& state, ElementId expired, int d_disc) {
    if (!state.goal_contains(expired) || !state.is_calibrated(expired)) {
        throw ContractViolation("re-calibration requires a calibrated goal element");
    }
    const int d = d_disc < 0 ? state.config.d_disc : d_disc;

    std::vector<std::uint8_t> discard(state.graph->size(), 0);
    for (ElementId h : state.graph->connectivity_subgraph(expired, d)) {
        if (state.goal_contains(h)) {
            discard[static_cast<std::size_t>(h)] = 1;
        }
    }
    std::erase_if(state.status, [&](const StatusEntry& e) {
        return discard[static_cast<std::size_t>(e.element)] != 0;
    });
    for (std::size_t id = 0; id < discard.size(); ++id) {
        if (discard[id] != 0) {
            state.calibrated[id] = 0;
            state.database[id] = DbEntry{};
        }
    }

    // Model drift: the expired element gets a fresh defect landscape drawn
    // under a bumped epoch.
    state.epoch[static_cast<std::size_t>(expired)] += 1;
    auto landscape = std::make_shared<DefectLandscape>(*state.landscape);
    landscape->resample(*state.graph, state.config, expired,
                        state.epoch[static_cast<std::size_t>(expired)]);
    state.landscape = std::move(landscape);

    return calibrate_graph(state);
}

RunSummary stitch(CalibrationState& state) { return calibrate_graph(state); }

}  // namespace snake
