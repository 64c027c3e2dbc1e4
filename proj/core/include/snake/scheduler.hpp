#pragma once

#include <vector>

#include "snake/state.hpp"
#include "snake/types.hpp"

namespace snake {

/// A constraint-disjoint region of uncalibrated goal elements. Subgoals
/// partition G* \ P* and can be calibrated in parallel without interference.
struct CalibrationSubgoal {
    int id = 0;
    std::vector<ElementId> members;  // sorted
};

/// A traversal-disjoint, single-kind component of one subgoal. Every thread
/// must be seeded once; elements of a thread may still be calibrated as
/// by-products of another thread's parameter sets, in which case its seed is
/// skipped.
struct TraversalThread {
    int subgoal_id = 0;
    int thread_id = 0;
    std::vector<ElementId> members;  // sorted
    ElementId seed = kInvalidElement;
};

/// Traversal options for central element g: uncalibrated, co-active,
/// same-kind goal elements within d_t of g (excluding g itself), ordered by
/// the configured heuristic with ties broken by ascending element id.
/// Membership is symmetric: h is an option of g iff g is an option of h.
std::vector<ElementId> build_traversal_options(const CalibrationState& state, ElementId g);

/// Segments the uncalibrated goal into constraint-disjoint subgoals: the
/// connected components of the interference relation
///   g ~ h  iff  (dist(g,h) <= d_r and co_active(g,h)) or dist(g,h) <= d_p.
/// The d_p clause keeps elements that one step could calibrate together in
/// one subgoal, so parallel workers never touch each other's elements.
std::vector<CalibrationSubgoal> build_calibration_subgoals(const CalibrationState& state);

/// Splits a subgoal into the connected components of the traversal-option
/// membership relation (same kind, co-active, within d_t), evaluated against
/// the current status. Components are single-kind by construction.
std::vector<TraversalThread> build_traversal_threads(const CalibrationState& state,
                                                     const CalibrationSubgoal& subgoal);

/// Seed of a thread: its smallest element id, or a seeded-random member when
/// the heuristic is random (stable across repeated calls for a given run
/// seed).
ElementId build_traversal_seed(const CalibrationState& state, const TraversalThread& thread);

}  // namespace snake
