#pragma once

#include <cstdint>
#include <vector>

#include "snake/state.hpp"
#include "snake/types.hpp"

namespace snake {

/// A complete frequency assignment over the goal: one grid index per goal
/// element, in state.goal (ascending id) order.
struct GlobalAssignment {
    std::vector<int> indices;
};

/// Assignment read out of the state's database. Raises ContractViolation if
/// any goal element is uncalibrated.
GlobalAssignment assignment_from_state(const CalibrationState& state);

/// The global objective the step-by-step engine decomposes: the sum of all
/// element errors plus every co-active unordered pair penalty within d_r,
/// or +infinity if any hard detuning bound is violated. Pure; independent of
/// enumeration order. The pair scan here is written independently of the
/// engine's per-step neighborhood construction on purpose.
double total_system_error(const CalibrationState& state, const GlobalAssignment& assignment);

struct BruteForceResult {
    GlobalAssignment assignment;
    double error = 0.0;
};

/// Exact global minimum of total_system_error over all feasible assignments,
/// with lexicographic tie-breaking. Refuses to run (BudgetExceeded) when
/// k^|goal| exceeds the budget.
BruteForceResult global_brute_force(const CalibrationState& state, std::uint64_t budget);

/// One violated hard bound.
struct Violation {
    ElementId a = kInvalidElement;
    ElementId b = kInvalidElement;
    int distance = 0;
    double detuning = 0.0;
};

/// Every co-active pair within d_hard whose detuning is below delta_hard.
/// Empty iff the assignment is feasible.
std::vector<Violation> validate(const CalibrationState& state, const GlobalAssignment& assignment);

}  // namespace snake
