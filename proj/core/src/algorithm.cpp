#include "snake/algorithm.hpp"

#include <algorithm>

#include "snake/errors.hpp"

namespace snake {

ActivitySet::ActivitySet(std::size_t element_count, std::span<const AlgorithmSubgraph> subgraphs)
    : masks_(element_count, 0), subgraph_count_(static_cast<int>(subgraphs.size())) {
    if (subgraphs.size() > 32) {
        throw ContractViolation("at most 32 algorithm subgraphs supported");
    }
    for (std::size_t i = 0; i < subgraphs.size(); ++i) {
        for (ElementId g : subgraphs[i].members) {
            if (g < 0 || static_cast<std::size_t>(g) >= element_count) {
                throw ContractViolation("algorithm subgraph member out of range");
            }
            masks_[static_cast<std::size_t>(g)] |= (1u << i);
        }
    }
}

std::vector<AlgorithmSubgraph> build_xeb_subgraphs(const ProcessorGraph& graph,
                                                   std::span<const ElementId> goal) {
    std::vector<AlgorithmSubgraph> subgraphs(5);
    for (int i = 0; i < 5; ++i) {
        subgraphs[static_cast<std::size_t>(i)].id = i;
    }
    for (ElementId id : goal) {
        const GraphElement& e = graph.element(id);
        if (e.is_parasitic()) {
            throw ContractViolation("calibration goal must not contain parasitic edges");
        }
        if (e.is_node()) {
            subgraphs[0].members.push_back(id);
            continue;
        }
        const GraphElement& a = graph.element(e.node_a);
        const GraphElement& b = graph.element(e.node_b);
        // node_a is the upper endpoint of a vertical edge and the left
        // endpoint of a horizontal edge (smaller id = smaller (row, col)).
        const bool vertical = a.col == b.col;
        const bool even = ((a.row + a.col) % 2) == 0;
        const int layer = vertical ? (even ? 1 : 2) : (even ? 3 : 4);
        subgraphs[static_cast<std::size_t>(layer)].members.push_back(id);
    }
    for (auto& sg : subgraphs) {
        std::sort(sg.members.begin(), sg.members.end());
    }
    return subgraphs;
}

std::vector<AlgorithmSubgraph> build_unstructured_subgraph(std::span<const ElementId> goal) {
    AlgorithmSubgraph all;
    all.id = 0;
    all.members.assign(goal.begin(), goal.end());
    std::sort(all.members.begin(), all.members.end());
    return {all};
}

}  // namespace snake
