#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snake/types.hpp"

namespace snake {

enum class ElementKind : std::uint8_t {
    kNode,
    kEngineeredEdge,
    kParasiticEdge,
};

const char* to_string(ElementKind kind);

/// A node or edge of the processor graph. Nodes carry lattice coordinates;
/// edges carry their two endpoint node ids (node_a < node_b). Engineered
/// edges connect lattice-adjacent nodes, parasitic edges connect diagonal
/// nodes. Parasitic edges carry no calibration parameters; they exist to
/// embed crosstalk constraints into the distance metric.
struct GraphElement {
    ElementId id = kInvalidElement;
    ElementKind kind = ElementKind::kNode;
    int row = -1;  // nodes only
    int col = -1;  // nodes only
    ElementId node_a = kInvalidElement;  // edges only
    ElementId node_b = kInvalidElement;  // edges only

    bool is_node() const { return kind == ElementKind::kNode; }
    bool is_edge() const { return kind != ElementKind::kNode; }
    bool is_engineered() const { return kind == ElementKind::kEngineeredEdge; }
    bool is_parasitic() const { return kind == ElementKind::kParasiticEdge; }
    bool has_endpoint(ElementId node) const { return node_a == node || node_b == node; }
};

/// Distance between two graph elements, counted in meta-steps of the
/// incidence meta-graph: an edge element is adjacent to exactly its two
/// endpoint nodes, and each hop costs one step. Unreachable pairs compare
/// greater than every finite distance.
class ElementDistance {
public:
    constexpr ElementDistance() = default;
    constexpr explicit ElementDistance(int steps) : steps_(steps) {}

    static constexpr ElementDistance infinite() {
        return ElementDistance(std::numeric_limits<int>::max());
    }

    constexpr int steps() const { return steps_; }
    constexpr bool is_infinite() const { return steps_ == std::numeric_limits<int>::max(); }
    constexpr bool within(int d) const { return steps_ <= d; }

    friend constexpr auto operator<=>(ElementDistance, ElementDistance) = default;

private:
    int steps_ = 0;
};

/// An element id together with its distance from some query center.
struct Neighbor {
    ElementId id = kInvalidElement;
    int distance = 0;
};

/// Immutable undirected processor graph. Construction validates the element
/// table and builds the incidence index; afterwards the graph is safe for
/// shared concurrent reads and all queries are pure.
class ProcessorGraph {
public:
    /// Builds from an explicit element table (ids must equal vector indexes).
    /// Grid dimensions are optional metadata for graphs not built by
    /// build_grid_graph.
    explicit ProcessorGraph(std::vector<GraphElement> elements, int rows = -1, int cols = -1);

    std::size_t size() const { return elements_.size(); }
    std::span<const GraphElement> elements() const { return elements_; }
    const GraphElement& element(ElementId id) const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::size_t node_count() const { return node_count_; }
    std::size_t engineered_count() const { return engineered_count_; }
    std::size_t parasitic_count() const { return parasitic_count_; }

    /// Incidence adjacency: a node lists its incident edges of both kinds,
    /// an edge lists its two endpoint nodes. Sorted by id.
    std::span<const ElementId> incident(ElementId id) const;

    /// Shortest incidence meta-path between two elements; infinite when
    /// disconnected.
    ElementDistance distance(ElementId a, ElementId b) const;

    /// Like distance(), but abandons the search beyond `cutoff` meta-steps
    /// and reports infinite instead.
    ElementDistance distance_within(ElementId a, ElementId b, int cutoff) const;

    /// All elements within d meta-steps of g, with their distances, sorted
    /// by id. Always contains g itself at distance 0.
    std::vector<Neighbor> neighborhood(ElementId g, int d) const;

    /// The connectivity subgraph X^d_g as a sorted id set.
    std::vector<ElementId> connectivity_subgraph(ElementId g, int d) const;

    /// Human-readable name, e.g. "n(0,1)", "e(0,0)-(0,1)", "p(0,0)-(1,1)".
    std::string element_name(ElementId id) const;

    std::optional<ElementId> find_node(int row, int col) const;
    std::optional<ElementId> find_edge(ElementId node_a, ElementId node_b) const;

private:
    void check_id(ElementId id) const;

    std::vector<GraphElement> elements_;
    std::vector<std::vector<ElementId>> incidence_;
    int rows_ = -1;
    int cols_ = -1;
    std::size_t node_count_ = 0;
    std::size_t engineered_count_ = 0;
    std::size_t parasitic_count_ = 0;
};

/// Builds the full R x C grid graph: R*C nodes, R(C-1)+C(R-1) engineered
/// edges, 2(R-1)(C-1) parasitic edges. Ids are deterministic: nodes in
/// row-major order, then engineered edges by (row, col, horizontal-first),
/// then parasitic edges by (row, col, down-right-first).
ProcessorGraph build_grid_graph(int rows, int cols);

/// Free-function form of graph.distance(g, h).
inline ElementDistance element_distance(const ProcessorGraph& graph, ElementId g, ElementId h) {
    return graph.distance(g, h);
}

}  // namespace snake
