#pragma once

#include <string>

#include "snake/engine.hpp"
#include "snake/state.hpp"

namespace snake {

/// Renders the run report: a human-readable summary followed by a
/// machine-readable "[machine]" block of key = value lines that mirrors every
/// figure. The machine block contains no timestamps; the wall time appears
/// only in the human section, so two identical runs differ at most in that
/// one line.
std::string emit_report(const CalibrationState& state, const RunSummary& summary,
                        double wall_seconds);

/// Rebuilds the step log of a state restored from a database file: records
/// grouped by step index, constraint counts recomputed against the elements
/// calibrated in earlier steps. Matches the original run's log for any
/// database produced by a fresh calibrate run.
void reconstruct_step_log(CalibrationState& state);

/// Segmentation counters of a fresh state under this config (what a fresh
/// calibrate run would report).
RunSummary fresh_segmentation_summary(const RunConfig& config);

}  // namespace snake
