#pragma once

#include <memory>
#include <span>
#include <vector>

#include "snake/algorithm.hpp"
#include "snake/config.hpp"
#include "snake/graph.hpp"
#include "snake/model.hpp"
#include "snake/types.hpp"

namespace snake {

/// One entry of the ordered calibration status P*: which element was
/// calibrated and at which step. A multi-element step contributes several
/// entries sharing one step index, in ascending element order.
struct StatusEntry {
    ElementId element = kInvalidElement;
    int step = -1;

    friend bool operator==(const StatusEntry&, const StatusEntry&) = default;
};

/// Per-element database entry: the chosen frequency grid index, the step that
/// produced it, and that step's optimized objective value.
struct DbEntry {
    int freq_index = -1;
    int step = -1;
    double objective = 0.0;

    friend bool operator==(const DbEntry&, const DbEntry&) = default;
};

/// Log record of one calibration step.
struct StepRecord {
    int step = -1;
    ElementId central = kInvalidElement;
    int parameter_count = 0;
    int constraint_count = 0;
    double value = 0.0;
};

/// Complete calibration state: the immutable problem (graph, activity,
/// landscape, config) plus the mutable progress (goal, status, database,
/// log). Copying a state is cheap; the immutable parts are shared. The
/// engine's parallel path hands each subgoal worker its own copy, which is
/// what makes scheduling invisible in the output.
struct CalibrationState {
    std::shared_ptr<const ProcessorGraph> graph;
    std::shared_ptr<const ActivitySet> activity;
    std::shared_ptr<const DefectLandscape> landscape;
    RunConfig config;

    std::vector<ElementId> goal;      // sorted element ids (nodes + engineered edges)
    std::vector<std::uint8_t> in_goal;     // by element id
    std::vector<std::uint8_t> calibrated;  // by element id
    std::vector<StatusEntry> status;       // ordered calibration status P*
    std::vector<DbEntry> database;         // by element id; valid iff calibrated
    std::vector<StepRecord> step_log;
    std::vector<int> epoch;  // by element id; drift counter for the landscape
    int next_step = 0;

    bool is_calibrated(ElementId g) const { return calibrated[static_cast<std::size_t>(g)] != 0; }
    bool goal_contains(ElementId g) const { return in_goal[static_cast<std::size_t>(g)] != 0; }

    int freq_index(ElementId g) const { return database[static_cast<std::size_t>(g)].freq_index; }
    double frequency(ElementId g) const { return config.domain().value(freq_index(g)); }

    std::size_t calibrated_count() const { return status.size(); }
    bool complete() const { return status.size() == goal.size(); }

    /// Uncalibrated goal elements, ascending.
    std::vector<ElementId> uncalibrated_goal() const;
};

/// Builds a fresh state over the full default goal (every node and engineered
/// edge of the grid).
CalibrationState make_state(const RunConfig& config);

/// Builds a fresh state over a custom goal (sorted, deduplicated). The goal
/// must not contain parasitic edges.
CalibrationState make_state(const RunConfig& config, std::vector<ElementId> goal);

/// Marks the given (element, frequency index, step, objective) records as
/// calibrated, e.g. when resuming from a database file or seeding pre-
/// calibrated regions in tests. Status order is (step, element) ascending;
/// next_step advances past the largest step seen.
struct RestoredRecord {
    ElementId element = kInvalidElement;
    int freq_index = -1;
    int step = -1;
    double objective = 0.0;
};
void restore_status(CalibrationState& state, std::span<const RestoredRecord> records);

}  // namespace snake
