#pragma once

#include <span>
#include <vector>

#include "snake/scheduler.hpp"
#include "snake/state.hpp"
#include "snake/types.hpp"

namespace snake {

/// Segmentation and progress counters of one calibrate_graph run.
struct RunSummary {
    int subgoals = 0;
    int node_threads = 0;
    int edge_threads = 0;
    int steps = 0;
};

/// Calibration parameters of a step centered on g: the uncalibrated goal
/// elements within d_p of g. Always contains g. Raises ContractViolation if
/// g is already calibrated or outside the goal.
std::vector<ElementId> build_parameters(const CalibrationState& state, ElementId g);

/// Active calibration constraints of a parameter set: calibrated elements
/// within d_r of some parameter element and co-active with it. Disjoint from
/// the parameters.
std::vector<ElementId> build_constraints(const CalibrationState& state,
                                         std::span<const ElementId> params);

/// One calibration step: builds parameters, constraints and the local error
/// model, optimizes it, commits all chosen frequencies to the database and
/// appends the parameters to the status in ascending element order under one
/// step index. The state is unchanged if the step is infeasible.
StepRecord calibrate_element(CalibrationState& state, ElementId g);

/// Recursive traversal from a seed: calibrate the seed if uncalibrated, then
/// follow its traversal options (re-evaluated against the updated status),
/// depth- or breadth-first per the config. A calibrated element is a no-op.
/// On an infeasible step, progress made so far is kept and the error
/// propagates.
void calibrate_thread(CalibrationState& state, ElementId seed);

/// Full graph calibration: segments the uncalibrated goal into subgoals,
/// seeds every traversal thread and traverses to completion. Subgoals run
/// serially or in parallel (config.parallel); the output is identical either
/// way. On return the status covers the goal, unless some subgoal hit an
/// infeasible step, in which case the other subgoals' results are kept and a
/// CalibrationAborted lists the failures.
RunSummary calibrate_graph(CalibrationState& state);

/// Local re-calibration after drift: discards the connectivity subgraph of
/// the expired element (d_disc < 0 uses the config default) from status and
/// database, resamples the expired element's defect landscape under a new
/// epoch, and runs calibrate_graph. Elements outside the discarded set keep
/// their exact frequencies.
RunSummary recalibrate(CalibrationState& state, ElementId expired, int d_disc = -1);

/// Stitching = running the unmodified graph calibration on a partially
/// calibrated state; calibrated regions act purely as constraints.
RunSummary stitch(CalibrationState& state);

}  // namespace snake
