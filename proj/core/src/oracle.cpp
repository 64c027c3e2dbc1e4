#include "snake/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "snake/errors.hpp"
#include "snake/model.hpp"

namespace snake {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PairEntry {
    int i = 0;  // goal ordinals, i < j
    int j = 0;
    int distance = 0;
    bool hard = false;
    bool soft = false;
};

// All constrained goal pairs, found by direct pairwise distance queries (a
// deliberately different traversal than the engine's per-step neighborhoods).
std::vector<PairEntry> enumerate_pairs(const CalibrationState& state) {
    const int d_r = state.config.d_r;
    const int d_hard = state.config.d_hard;
    const int reach = std::max(d_r, d_hard);
    std::vector<PairEntry> pairs;
    const std::size_t n = state.goal.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!state.activity->co_active(state.goal[i], state.goal[j])) {
                continue;
            }
            const ElementDistance dist =
                state.graph->distance_within(state.goal[i], state.goal[j], reach);
            if (dist.is_infinite()) {
                continue;
            }
            PairEntry entry;
            entry.i = static_cast<int>(i);
            entry.j = static_cast<int>(j);
            entry.distance = dist.steps();
            entry.hard = dist.within(d_hard);
            entry.soft = dist.within(d_r);
            if (entry.hard || entry.soft) {
                pairs.push_back(entry);
            }
        }
    }
    return pairs;
}

void check_complete(const CalibrationState& state, const GlobalAssignment& assignment) {
    if (assignment.indices.size() != state.goal.size()) {
        throw ContractViolation("assignment does not cover the goal");
    }
    for (int v : assignment.indices) {
        if (v < 0 || v >= state.config.k) {
            throw ContractViolation("assignment index outside the frequency domain");
        }
    }
}

}  // namespace

GlobalAssignment assignment_from_state(const CalibrationState& state) {
    GlobalAssignment assignment;
    assignment.indices.reserve(state.goal.size());
    for (ElementId g : state.goal) {
        if (!state.is_calibrated(g)) {
            throw ContractViolation("database is incomplete: element " +
                                    state.graph->element_name(g) + " is uncalibrated");
        }
        assignment.indices.push_back(state.freq_index(g));
    }
    return assignment;
}

double total_system_error(const CalibrationState& state, const GlobalAssignment& assignment) {
    check_complete(state, assignment);
    const FrequencyDomain domain = state.config.domain();
    const ModelParams params = model_params(state.config);

    double total = 0.0;
    for (std::size_t i = 0; i < state.goal.size(); ++i) {
        total += element_error(*state.graph, state.goal[i],
                               domain.value(assignment.indices[i]), *state.landscape, params);
    }
    for (const PairEntry& pair : enumerate_pairs(state)) {
        const double detuning =
            index_detuning(domain, assignment.indices[static_cast<std::size_t>(pair.i)],
                           assignment.indices[static_cast<std::size_t>(pair.j)]);
        if (pair.hard && detuning < params.penalty.delta_hard) {
            return kInf;
        }
        if (pair.soft) {
            total += pair_penalty_detuned(
                state.graph->element(state.goal[static_cast<std::size_t>(pair.i)]),
                state.graph->element(state.goal[static_cast<std::size_t>(pair.j)]), detuning,
                pair.distance, params.penalty);
        }
    }
    return total;
}

BruteForceResult global_brute_force(const CalibrationState& state, std::uint64_t budget) {
    const std::size_t n = state.goal.size();
    long double required = 1.0L;
    for (std::size_t i = 0; i < n; ++i) {
        required *= static_cast<long double>(state.config.k);
        if (required > static_cast<long double>(budget)) {
            std::ostringstream os;
            os << "brute force refused: k^|goal| = " << state.config.k << "^" << n << " exceeds budget "
               << budget;
            throw BudgetExceeded(required, budget, os.str());
        }
    }

    const FrequencyDomain domain = state.config.domain();
    const ModelParams params = model_params(state.config);

    // Element error tables and per-ordinal backward pair lists.
    std::vector<std::vector<double>> elem_cost(n);
    for (std::size_t i = 0; i < n; ++i) {
        elem_cost[i].resize(static_cast<std::size_t>(state.config.k));
        for (int v = 0; v < state.config.k; ++v) {
            elem_cost[i][static_cast<std::size_t>(v)] = element_error(
                *state.graph, state.goal[i], domain.value(v), *state.landscape, params);
        }
    }
    std::vector<std::vector<PairEntry>> backward(n);
    for (const PairEntry& pair : enumerate_pairs(state)) {
        backward[static_cast<std::size_t>(pair.j)].push_back(pair);
    }

    std::vector<int> idx(n, 0);
    std::vector<int> best_idx;
    double best = kInf;

    // Depth-first enumeration in lexicographic order. Partial sums only grow
    // (every term is non-negative), so a prefix at or above the incumbent can
    // be cut without losing the first-found minimizer.
    auto descend = [&](auto&& self, std::size_t depth, double partial) -> void {
        if (depth == n) {
            if (partial < best) {
                best = partial;
                best_idx = idx;
            }
            return;
        }
        for (int v = 0; v < state.config.k; ++v) {
            double cost = elem_cost[depth][static_cast<std::size_t>(v)];
            bool feasible = true;
            for (const PairEntry& pair : backward[depth]) {
                const double detuning =
                    index_detuning(domain, v, idx[static_cast<std::size_t>(pair.i)]);
                if (pair.hard && detuning < params.penalty.delta_hard) {
                    feasible = false;
                    break;
                }
                if (pair.soft) {
                    cost += pair_penalty_detuned(
                        state.graph->element(state.goal[depth]),
                        state.graph->element(state.goal[static_cast<std::size_t>(pair.i)]),
                        detuning, pair.distance, params.penalty);
                }
            }
            if (!feasible || partial + cost >= best) {
                continue;
            }
            idx[depth] = v;
            self(self, depth + 1, partial + cost);
        }
        idx[depth] = 0;
    };
    descend(descend, 0, 0.0);

    if (!std::isfinite(best)) {
        throw InfeasibleStepError(state.goal.empty() ? kInvalidElement : state.goal.front(), {},
                                  "no feasible global assignment exists; increase k or reduce "
                                  "delta_hard");
    }
    // Report the optimum through the same functional used everywhere else,
    // so equal assignments compare bit-equal.
    BruteForceResult result{GlobalAssignment{std::move(best_idx)}, 0.0};
    result.error = total_system_error(state, result.assignment);
    return result;
}

std::vector<Violation> validate(const CalibrationState& state, const GlobalAssignment& assignment) {
    check_complete(state, assignment);
    const FrequencyDomain domain = state.config.domain();
    const double delta_hard = state.config.delta_hard;

    std::vector<Violation> violations;
    for (const PairEntry& pair : enumerate_pairs(state)) {
        if (!pair.hard) {
            continue;
        }
        const double detuning =
            index_detuning(domain, assignment.indices[static_cast<std::size_t>(pair.i)],
                           assignment.indices[static_cast<std::size_t>(pair.j)]);
        if (detuning < delta_hard) {
            Violation v;
            v.a = state.goal[static_cast<std::size_t>(pair.i)];
            v.b = state.goal[static_cast<std::size_t>(pair.j)];
            v.distance = pair.distance;
            v.detuning = detuning;
            violations.push_back(v);
        }
    }
    return violations;
}

}  // namespace snake
