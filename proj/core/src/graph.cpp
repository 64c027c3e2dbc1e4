#include "snake/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <map>

#include "snake/errors.hpp"

namespace snake {

const char* to_string(ElementKind kind) {
    switch (kind) {
        case ElementKind::kNode:
            return "node";
        case ElementKind::kEngineeredEdge:
            return "edge";
        case ElementKind::kParasiticEdge:
            return "parasitic";
    }
    return "?";
}

ProcessorGraph::ProcessorGraph(std::vector<GraphElement> elements, int rows, int cols)
    : elements_(std::move(elements)), rows_(rows), cols_(cols) {
    incidence_.resize(elements_.size());
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        const GraphElement& e = elements_[i];
        if (e.id != static_cast<ElementId>(i)) {
            throw ContractViolation("graph element id does not match its table index");
        }
        if (e.is_node()) {
            ++node_count_;
            if (e.row < 0 || e.col < 0) {
                throw ContractViolation("node without lattice coordinates");
            }
            continue;
        }
        if (e.kind == ElementKind::kEngineeredEdge) {
            ++engineered_count_;
        } else {
            ++parasitic_count_;
        }
        if (e.node_a < 0 || e.node_b < 0 || e.node_a >= static_cast<ElementId>(elements_.size()) ||
            e.node_b >= static_cast<ElementId>(elements_.size()) || e.node_a >= e.node_b) {
            throw ContractViolation("edge endpoints malformed (need node_a < node_b, both valid)");
        }
        const GraphElement& a = elements_[e.node_a];
        const GraphElement& b = elements_[e.node_b];
        if (!a.is_node() || !b.is_node()) {
            throw ContractViolation("edge endpoint is not a node");
        }
        const int dr = std::abs(a.row - b.row);
        const int dc = std::abs(a.col - b.col);
        if (e.kind == ElementKind::kEngineeredEdge && dr + dc != 1) {
            throw ContractViolation("engineered edge must connect lattice-adjacent nodes");
        }
        if (e.kind == ElementKind::kParasiticEdge && !(dr == 1 && dc == 1)) {
            throw ContractViolation("parasitic edge must connect diagonal nodes");
        }
        incidence_[e.node_a].push_back(e.id);
        incidence_[e.node_b].push_back(e.id);
        incidence_[e.id].push_back(e.node_a);
        incidence_[e.id].push_back(e.node_b);
    }
    for (auto& list : incidence_) {
        std::sort(list.begin(), list.end());
    }
}

const GraphElement& ProcessorGraph::element(ElementId id) const {
    check_id(id);
    return elements_[static_cast<std::size_t>(id)];
}

std::span<const ElementId> ProcessorGraph::incident(ElementId id) const {
    check_id(id);
    return incidence_[static_cast<std::size_t>(id)];
}

void ProcessorGraph::check_id(ElementId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= elements_.size()) {
        throw ContractViolation("element id out of range");
    }
}

ElementDistance ProcessorGraph::distance(ElementId a, ElementId b) const {
    return distance_within(a, b, std::numeric_limits<int>::max());
}

ElementDistance ProcessorGraph::distance_within(ElementId a, ElementId b, int cutoff) const {
    check_id(a);
    check_id(b);
    if (a == b) {
        return ElementDistance(0);
    }
    if (cutoff <= 0) {
        return ElementDistance::infinite();
    }
    std::vector<int> dist(elements_.size(), -1);
    std::deque<ElementId> frontier;
    dist[static_cast<std::size_t>(a)] = 0;
    frontier.push_back(a);
    while (!frontier.empty()) {
        const ElementId cur = frontier.front();
        frontier.pop_front();
        const int next = dist[static_cast<std::size_t>(cur)] + 1;
        if (next > cutoff) {
            break;
        }
        for (ElementId adj : incidence_[static_cast<std::size_t>(cur)]) {
            if (dist[static_cast<std::size_t>(adj)] >= 0) {
                continue;
            }
            if (adj == b) {
                return ElementDistance(next);
            }
            dist[static_cast<std::size_t>(adj)] = next;
            frontier.push_back(adj);
        }
    }
    return ElementDistance::infinite();
}

std::vector<Neighbor> ProcessorGraph::neighborhood(ElementId g, int d) const {
    check_id(g);
    if (d < 0) {
        throw ContractViolation("neighborhood distance must be non-negative");
    }
    std::vector<int> dist(elements_.size(), -1);
    std::deque<ElementId> frontier;
    dist[static_cast<std::size_t>(g)] = 0;
    frontier.push_back(g);
    std::vector<Neighbor> found;
    found.push_back({g, 0});
    while (!frontier.empty()) {
        const ElementId cur = frontier.front();
        frontier.pop_front();
        const int next = dist[static_cast<std::size_t>(cur)] + 1;
        if (next > d) {
            continue;
        }
        for (ElementId adj : incidence_[static_cast<std::size_t>(cur)]) {
            if (dist[static_cast<std::size_t>(adj)] >= 0) {
                continue;
            }
            dist[static_cast<std::size_t>(adj)] = next;
            found.push_back({adj, next});
            frontier.push_back(adj);
        }
    }
    std::sort(found.begin(), found.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.id < y.id; });
    return found;
}

std::vector<ElementId> ProcessorGraph::connectivity_subgraph(ElementId g, int d) const {
    const std::vector<Neighbor> hood = neighborhood(g, d);
    std::vector<ElementId> ids;
    ids.reserve(hood.size());
    for (const Neighbor& n : hood) {
        ids.push_back(n.id);
    }
    return ids;
}

std::string ProcessorGraph::element_name(ElementId id) const {
    const GraphElement& e = element(id);
    char buf[64];
    if (e.is_node()) {
        std::snprintf(buf, sizeof(buf), "n(%d,%d)", e.row, e.col);
        return buf;
    }
    const GraphElement& a = element(e.node_a);
    const GraphElement& b = element(e.node_b);
    std::snprintf(buf, sizeof(buf), "%c(%d,%d)-(%d,%d)", e.is_engineered() ? 'e' : 'p', a.row,
                  a.col, b.row, b.col);
    return buf;
}

std::optional<ElementId> ProcessorGraph::find_node(int row, int col) const {
    if (rows_ > 0 && cols_ > 0) {
        if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
            return std::nullopt;
        }
        return static_cast<ElementId>(row * cols_ + col);
    }
    for (const GraphElement& e : elements_) {
        if (e.is_node() && e.row == row && e.col == col) {
            return e.id;
        }
    }
    return std::nullopt;
}

std::optional<ElementId> ProcessorGraph::find_edge(ElementId node_a, ElementId node_b) const {
    if (node_a > node_b) {
        std::swap(node_a, node_b);
    }
    check_id(node_a);
    for (ElementId adj : incidence_[static_cast<std::size_t>(node_a)]) {
        const GraphElement& e = elements_[static_cast<std::size_t>(adj)];
        if (e.is_edge() && e.node_a == node_a && e.node_b == node_b) {
            return e.id;
        }
    }
    return std::nullopt;
}

ProcessorGraph build_grid_graph(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw ContractViolation("grid dimensions must be positive");
    }
    std::vector<GraphElement> elements;
    elements.reserve(static_cast<std::size_t>(rows * cols) * 4);

    auto node_id = [cols](int r, int c) { return static_cast<ElementId>(r * cols + c); };

    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            GraphElement n;
            n.id = node_id(r, c);
            n.kind = ElementKind::kNode;
            n.row = r;
            n.col = c;
            elements.push_back(n);
        }
    }
    ElementId next = static_cast<ElementId>(elements.size());
    auto add_edge = [&](ElementKind kind, ElementId a, ElementId b) {
        GraphElement e;
        e.id = next++;
        e.kind = kind;
        e.node_a = std::min(a, b);
        e.node_b = std::max(a, b);
        elements.push_back(e);
    };
    // Engineered edges, anchored at their upper-left endpoint, horizontal
    // before vertical.
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) {
                add_edge(ElementKind::kEngineeredEdge, node_id(r, c), node_id(r, c + 1));
            }
            if (r + 1 < rows) {
                add_edge(ElementKind::kEngineeredEdge, node_id(r, c), node_id(r + 1, c));
            }
        }
    }
    // Parasitic (diagonal) edges, anchored at their top endpoint, down-right
    // before down-left.
    for (int r = 0; r + 1 < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) {
                add_edge(ElementKind::kParasiticEdge, node_id(r, c), node_id(r + 1, c + 1));
            }
            if (c - 1 >= 0) {
                add_edge(ElementKind::kParasiticEdge, node_id(r, c), node_id(r + 1, c - 1));
            }
        }
    }
    return ProcessorGraph(std::move(elements), rows, cols);
}

}  // namespace snake
