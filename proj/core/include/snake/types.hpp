#pragma once

#include <cstdint>

namespace snake {

/// Stable identifier of a processor-graph element (node or edge).
/// Ids are assigned deterministically at graph construction and index
/// directly into the graph's element table.
using ElementId = std::int32_t;

inline constexpr ElementId kInvalidElement = -1;

}  // namespace snake
