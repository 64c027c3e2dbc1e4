#include "snake/report.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "snake/oracle.hpp"

namespace snake {
namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::map<int, int> histogram(const std::vector<StepRecord>& log, bool constraints) {
    std::map<int, int> hist;
    for (const StepRecord& r : log) {
        ++hist[constraints ? r.constraint_count : r.parameter_count];
    }
    return hist;
}

}  // namespace

std::string emit_report(const CalibrationState& state, const RunSummary& summary,
                        double wall_seconds) {
    const std::map<int, int> dims = histogram(state.step_log, false);
    const std::map<int, int> cons = histogram(state.step_log, true);
    const bool complete = state.complete();
    double total_error = 0.0;
    if (complete) {
        total_error = total_system_error(state, assignment_from_state(state));
    }

    std::ostringstream os;
    os << "snake calibration report\n";
    os << "========================\n";
    os << "grid:             " << state.config.rows << " x " << state.config.cols << '\n';
    os << "goal elements:    " << state.goal.size() << '\n';
    os << "calibrated:       " << state.calibrated_count() << (complete ? " (complete)" : "")
       << '\n';
    os << "steps logged:     " << state.step_log.size() << '\n';
    os << "subgoals:         " << summary.subgoals << '\n';
    os << "node threads:     " << summary.node_threads << '\n';
    os << "edge threads:     " << summary.edge_threads << '\n';
    if (!dims.empty()) {
        os << "dimension range:  " << dims.begin()->first << ".." << dims.rbegin()->first << '\n';
        os << "constraint range: " << cons.begin()->first << ".." << cons.rbegin()->first << '\n';
    }
    if (complete) {
        os << "total system error: " << format_double(total_error) << '\n';
    }
    {
        char wall[40];
        std::snprintf(wall, sizeof(wall), "%.3f", wall_seconds);
        os << "wall time:        " << wall << " s\n";
    }
    os << '\n';

    char digest[24];
    std::snprintf(digest, sizeof(digest), "%016" PRIx64, config_digest(state.config));
    os << "[machine]\n";
    os << "rows = " << state.config.rows << '\n';
    os << "cols = " << state.config.cols << '\n';
    os << "k = " << state.config.k << '\n';
    os << "seed = " << state.config.seed << '\n';
    os << "digest = " << digest << '\n';
    os << "goal = " << state.goal.size() << '\n';
    os << "calibrated = " << state.calibrated_count() << '\n';
    os << "complete = " << (complete ? "true" : "false") << '\n';
    os << "steps = " << state.step_log.size() << '\n';
    os << "subgoals = " << summary.subgoals << '\n';
    os << "node_threads = " << summary.node_threads << '\n';
    os << "edge_threads = " << summary.edge_threads << '\n';
    if (!dims.empty()) {
        os << "dim_min = " << dims.begin()->first << '\n';
        os << "dim_max = " << dims.rbegin()->first << '\n';
        for (const auto& [dim, count] : dims) {
            os << "dim_hist_" << dim << " = " << count << '\n';
        }
        os << "con_min = " << cons.begin()->first << '\n';
        os << "con_max = " << cons.rbegin()->first << '\n';
        for (const auto& [con, count] : cons) {
            os << "con_hist_" << con << " = " << count << '\n';
        }
    }
    if (complete) {
        os << "total_system_error = " << format_double(total_error) << '\n';
    }
    return os.str();
}

void reconstruct_step_log(CalibrationState& state) {
    state.step_log.clear();
    std::map<int, std::vector<ElementId>> groups;
    for (ElementId g : state.goal) {
        if (state.is_calibrated(g)) {
            groups[state.database[static_cast<std::size_t>(g)].step].push_back(g);
        }
    }
    for (auto& [step, members] : groups) {
        std::sort(members.begin(), members.end());
        // Constraints at step time: elements calibrated in earlier steps,
        // within d_r of some member and co-active with it.
        std::set<ElementId> constraints;
        for (ElementId g : members) {
            for (const Neighbor& nb : state.graph->neighborhood(g, state.config.d_r)) {
                if (nb.id == g || !state.is_calibrated(nb.id)) {
                    continue;
                }
                if (state.database[static_cast<std::size_t>(nb.id)].step >= step) {
                    continue;
                }
                if (!state.activity->co_active(g, nb.id)) {
                    continue;
                }
                constraints.insert(nb.id);
            }
        }
        StepRecord record;
        record.step = step;
        record.central = members.front();
        record.parameter_count = static_cast<int>(members.size());
        record.constraint_count = static_cast<int>(constraints.size());
        record.value = state.database[static_cast<std::size_t>(members.front())].objective;
        state.step_log.push_back(record);
    }
}

RunSummary fresh_segmentation_summary(const RunConfig& config) {
    CalibrationState fresh = make_state(config);
    RunSummary summary;
    const std::vector<CalibrationSubgoal> subgoals = build_calibration_subgoals(fresh);
    summary.subgoals = static_cast<int>(subgoals.size());
    for (const CalibrationSubgoal& sg : subgoals) {
        for (const TraversalThread& t : build_traversal_threads(fresh, sg)) {
            if (fresh.graph->element(t.members.front()).is_node()) {
                ++summary.node_threads;
            } else {
                ++summary.edge_threads;
            }
        }
    }
    return summary;
}

}  // namespace snake
