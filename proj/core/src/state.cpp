#include "snake/state.hpp"

#include <algorithm>

#include "snake/errors.hpp"

namespace snake {
namespace {

CalibrationState finish_state(std::shared_ptr<const ProcessorGraph> graph, RunConfig config,
                              std::vector<ElementId> goal) {
    validate_and_resolve(config);
    CalibrationState state;
    state.graph = std::move(graph);
    state.config = config;
    state.goal = std::move(goal);

    const std::size_t n = state.graph->size();
    state.in_goal.assign(n, 0);
    state.calibrated.assign(n, 0);
    state.database.assign(n, DbEntry{});
    state.epoch.assign(n, 0);
    for (ElementId g : state.goal) {
        if (g < 0 || static_cast<std::size_t>(g) >= n) {
            throw ContractViolation("goal element id out of range");
        }
        if (state.graph->element(g).is_parasitic()) {
            throw ContractViolation("calibration goal must not contain parasitic edges");
        }
        state.in_goal[static_cast<std::size_t>(g)] = 1;
    }

    std::vector<AlgorithmSubgraph> subgraphs =
        config.algorithm == AlgorithmMode::kXeb
            ? build_xeb_subgraphs(*state.graph, state.goal)
            : build_unstructured_subgraph(state.goal);
    state.activity = std::make_shared<const ActivitySet>(n, subgraphs);
    state.landscape =
        std::make_shared<const DefectLandscape>(DefectLandscape::sample(*state.graph, config));
    return state;
}

}  // namespace

std::vector<ElementId> CalibrationState::uncalibrated_goal() const {
    std::vector<ElementId> out;
    out.reserve(goal.size() - status.size());
    for (ElementId g : goal) {
        if (!is_calibrated(g)) {
            out.push_back(g);
        }
    }
    return out;
}

CalibrationState make_state(const RunConfig& config) {
    auto graph = std::make_shared<const ProcessorGraph>(build_grid_graph(config.rows, config.cols));
    std::vector<ElementId> goal;
    goal.reserve(graph->node_count() + graph->engineered_count());
    for (const GraphElement& e : graph->elements()) {
        if (!e.is_parasitic()) {
            goal.push_back(e.id);
        }
    }
    return finish_state(std::move(graph), config, std::move(goal));
}

CalibrationState make_state(const RunConfig& config, std::vector<ElementId> goal) {
    auto graph = std::make_shared<const ProcessorGraph>(build_grid_graph(config.rows, config.cols));
    std::sort(goal.begin(), goal.end());
    goal.erase(std::unique(goal.begin(), goal.end()), goal.end());
    return finish_state(std::move(graph), config, std::move(goal));
}

void restore_status(CalibrationState& state, std::span<const RestoredRecord> records) {
    std::vector<RestoredRecord> sorted(records.begin(), records.end());
    std::sort(sorted.begin(), sorted.end(), [](const RestoredRecord& a, const RestoredRecord& b) {
        return a.step != b.step ? a.step < b.step : a.element < b.element;
    });
    for (const RestoredRecord& r : sorted) {
        if (r.element < 0 || static_cast<std::size_t>(r.element) >= state.graph->size() ||
            !state.goal_contains(r.element)) {
            throw ContractViolation("restored record for element outside the goal");
        }
        if (state.is_calibrated(r.element)) {
            throw ContractViolation("restored record repeats an element");
        }
        if (r.freq_index < 0 || r.freq_index >= state.config.k) {
            throw ContractViolation("restored frequency index out of domain");
        }
        state.calibrated[static_cast<std::size_t>(r.element)] = 1;
        state.database[static_cast<std::size_t>(r.element)] =
            DbEntry{r.freq_index, r.step, r.objective};
        state.status.push_back(StatusEntry{r.element, r.step});
        state.next_step = std::max(state.next_step, r.step + 1);
    }
}

}  // namespace snake
