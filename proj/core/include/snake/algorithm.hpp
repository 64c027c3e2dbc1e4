#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "snake/graph.hpp"
#include "snake/types.hpp"

namespace snake {

/// One spacetime layer of the target algorithm: the set of goal elements that
/// are simultaneously active at that moment, and can therefore interfere.
struct AlgorithmSubgraph {
    int id = 0;
    std::vector<ElementId> members;  // sorted
};

/// Per-element membership masks over the algorithm subgraphs. Two elements
/// are co-active iff their masks intersect.
class ActivitySet {
public:
    ActivitySet(std::size_t element_count, std::span<const AlgorithmSubgraph> subgraphs);

    bool co_active(ElementId g, ElementId h) const {
        return (masks_[static_cast<std::size_t>(g)] & masks_[static_cast<std::size_t>(h)]) != 0;
    }

    /// True iff g belongs to at least one subgraph.
    bool active(ElementId g) const { return masks_[static_cast<std::size_t>(g)] != 0; }

    std::uint32_t mask(ElementId g) const { return masks_[static_cast<std::size_t>(g)]; }
    int subgraph_count() const { return subgraph_count_; }

private:
    std::vector<std::uint32_t> masks_;
    int subgraph_count_ = 0;
};

/// Subgraphs for cross-entropy benchmarking: alternating single-qubit layers
/// and four two-qubit edge-pattern layers. Returns exactly 5 subgraphs:
///   A0 = all goal nodes,
///   A1/A2 = vertical engineered edges with even/odd upper-endpoint parity,
///   A3/A4 = horizontal engineered edges with even/odd left-endpoint parity.
/// The four edge layers are matchings that tile the grid.
std::vector<AlgorithmSubgraph> build_xeb_subgraphs(const ProcessorGraph& graph,
                                                   std::span<const ElementId> goal);

/// Single-subgraph treatment of unstructured computation: every goal element
/// can be active at any moment, so everything is mutually co-active.
std::vector<AlgorithmSubgraph> build_unstructured_subgraph(std::span<const ElementId> goal);

/// True iff some algorithm subgraph contains both g and h. Symmetric, and
/// reflexive on elements belonging to any subgraph.
inline bool co_active(const ActivitySet& activity, ElementId g, ElementId h) {
    return activity.co_active(g, h);
}

}  // namespace snake
