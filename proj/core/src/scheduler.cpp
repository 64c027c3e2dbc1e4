#include "snake/scheduler.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "snake/errors.hpp"
#include "snake/rng.hpp"

namespace snake {
namespace {

constexpr std::uint64_t kOptionShuffleTag = 0x4f505453ull;  // "OPTS"
constexpr std::uint64_t kSeedPickTag = 0x53454544ull;       // "SEED"

// Union-find over a compact index range.
class Dsu {
public:
    explicit Dsu(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

// Members of the traversal-option relation for center g, regardless of sort
// order. Shared by option building and thread segmentation.
std::vector<ElementId> traversal_candidates(const CalibrationState& state, ElementId g) {
    const ElementKind kind = state.graph->element(g).kind;
    std::vector<ElementId> candidates;
    for (const Neighbor& nb : state.graph->neighborhood(g, state.config.d_t)) {
        if (nb.id == g || !state.goal_contains(nb.id) || state.is_calibrated(nb.id)) {
            continue;
        }
        if (state.graph->element(nb.id).kind != kind) {
            continue;
        }
        if (!state.activity->co_active(g, nb.id)) {
            continue;
        }
        candidates.push_back(nb.id);
    }
    return candidates;  // ascending by id (neighborhood is sorted)
}

int calibrated_neighbor_count(const CalibrationState& state, ElementId g) {
    int count = 0;
    for (const Neighbor& nb : state.graph->neighborhood(g, state.config.d_r)) {
        if (nb.id != g && state.is_calibrated(nb.id)) {
            ++count;
        }
    }
    return count;
}

// Components of `relation` restricted to `members`; each component comes out
// sorted and the component list is ordered by smallest member.
template <typename Relation>
std::vector<std::vector<ElementId>> connected_components(const std::vector<ElementId>& members,
                                                         Relation&& relation) {
    std::map<ElementId, std::size_t> index;
    for (std::size_t i = 0; i < members.size(); ++i) {
        index.emplace(members[i], i);
    }
    Dsu dsu(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (ElementId h : relation(members[i])) {
            const auto it = index.find(h);
            if (it != index.end()) {
                dsu.unite(i, it->second);
            }
        }
    }
    std::map<std::size_t, std::vector<ElementId>> by_root;
    for (std::size_t i = 0; i < members.size(); ++i) {
        by_root[dsu.find(i)].push_back(members[i]);
    }
    std::vector<std::vector<ElementId>> components;
    components.reserve(by_root.size());
    for (auto& [root, ids] : by_root) {
        std::sort(ids.begin(), ids.end());
        components.push_back(std::move(ids));
    }
    std::sort(components.begin(), components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return components;
}

}  // namespace

std::vector<ElementId> build_traversal_options(const CalibrationState& state, ElementId g) {
    if (!state.goal_contains(g)) {
        throw ContractViolation("traversal options requested for an element outside the goal");
    }
    std::vector<ElementId> options = traversal_candidates(state, g);
    switch (state.config.heuristic) {
        case Heuristic::kInsertionOrder:
            break;  // already ascending by id
        case Heuristic::kRandom: {
            // Keyed by (run seed, center) only, so the permutation does not
            // depend on when or where in the schedule it is drawn.
            Rng rng = Rng::keyed(
                {state.config.seed, kOptionShuffleTag, static_cast<std::uint64_t>(g)});
            rng.shuffle(options);
            break;
        }
        case Heuristic::kMostCalibratedNeighbors: {
            std::vector<std::pair<int, ElementId>> keyed;
            keyed.reserve(options.size());
            for (ElementId h : options) {
                keyed.emplace_back(-calibrated_neighbor_count(state, h), h);
            }
            std::sort(keyed.begin(), keyed.end());
            for (std::size_t i = 0; i < keyed.size(); ++i) {
                options[i] = keyed[i].second;
            }
            break;
        }
    }
    return options;
}

std::vector<CalibrationSubgoal> build_calibration_subgoals(const CalibrationState& state) {
    const std::vector<ElementId> domain = state.uncalibrated_goal();
    const int reach = std::max(state.config.d_r, state.config.d_p);

    auto interferes_with = [&](ElementId g) {
        std::vector<ElementId> linked;
        for (const Neighbor& nb : state.graph->neighborhood(g, reach)) {
            if (nb.id == g || !state.goal_contains(nb.id) || state.is_calibrated(nb.id)) {
                continue;
            }
            const bool constraint_link =
                nb.distance <= state.config.d_r && state.activity->co_active(g, nb.id);
            const bool parameter_link = nb.distance <= state.config.d_p;
            if (constraint_link || parameter_link) {
                linked.push_back(nb.id);
            }
        }
        return linked;
    };

    std::vector<CalibrationSubgoal> subgoals;
    for (auto& component : connected_components(domain, interferes_with)) {
        CalibrationSubgoal sg;
        sg.id = static_cast<int>(subgoals.size());
        sg.members = std::move(component);
        subgoals.push_back(std::move(sg));
    }
    return subgoals;
}

std::vector<TraversalThread> build_traversal_threads(const CalibrationState& state,
                                                     const CalibrationSubgoal& subgoal) {
    auto reaches = [&](ElementId g) { return traversal_candidates(state, g); };
    std::vector<TraversalThread> threads;
    for (auto& component : connected_components(subgoal.members, reaches)) {
        TraversalThread thread;
        thread.subgoal_id = subgoal.id;
        thread.thread_id = static_cast<int>(threads.size());
        thread.members = std::move(component);
        thread.seed = build_traversal_seed(state, thread);
        threads.push_back(std::move(thread));
    }
    return threads;
}

ElementId build_traversal_seed(const CalibrationState& state, const TraversalThread& thread) {
    if (thread.members.empty()) {
        throw ContractViolation("cannot seed an empty traversal thread");
    }
    if (state.config.heuristic == Heuristic::kRandom) {
        Rng rng = Rng::keyed({state.config.seed, kSeedPickTag,
                              static_cast<std::uint64_t>(thread.members.front())});
        const std::size_t pick = rng.next_u64() % thread.members.size();
        return thread.members[pick];
    }
    return thread.members.front();
}

}  // namespace snake
