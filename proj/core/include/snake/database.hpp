#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snake/state.hpp"
#include "snake/types.hpp"

namespace snake {

/// One serialized database record. Frequencies are stored as grid indices
/// (exact integers), never as floating-point values, so files round-trip and
/// diff bit-exactly across runs.
struct DbRecord {
    ElementId element = kInvalidElement;
    ElementKind kind = ElementKind::kNode;
    int freq_index = -1;
    int step = -1;
    double objective = 0.0;
};

/// In-memory image of a parameter database file.
struct ParameterDatabaseFile {
    int version = 1;
    std::uint64_t digest = 0;
    std::uint64_t seed = 0;
    int rows = 0;
    int cols = 0;
    std::vector<DbRecord> records;  // ascending element id
};

/// Snapshot of the state's database, ready for serialization.
ParameterDatabaseFile snapshot_database(const CalibrationState& state);

std::string serialize_database(const ParameterDatabaseFile& file);
ParameterDatabaseFile deserialize_database(const std::string& text);

void write_database(const CalibrationState& state, const std::string& path);
ParameterDatabaseFile read_database(const std::string& path);

/// Replays a database file into a fresh state built from the same config.
/// Refuses on config digest or dimension mismatch. Status order is restored
/// as (step, element) ascending, which reproduces the writing run's order.
void apply_database(CalibrationState& state, const ParameterDatabaseFile& file);

}  // namespace snake
