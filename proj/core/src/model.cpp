#include "snake/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "snake/errors.hpp"
#include "snake/rng.hpp"

namespace snake {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Key tags keep the independent random streams from colliding.
constexpr std::uint64_t kLandscapeTag = 0x4c414e44ull;  // "LAND"

std::vector<Defect> sample_defects(const RunConfig& config, ElementId element, int epoch) {
    Rng rng = Rng::keyed({config.seed, kLandscapeTag, static_cast<std::uint64_t>(element),
                          static_cast<std::uint64_t>(epoch)});
    const double band = config.f_max - config.f_min;
    const int count = std::min(rng.poisson(config.defect_lambda), 8);
    std::vector<Defect> defects;
    defects.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        Defect d;
        d.center = rng.uniform(config.f_min, config.f_max);
        d.amplitude = rng.uniform(0.5 * config.eps0, 5.0 * config.eps0);
        d.width = rng.uniform(0.005, 0.025) * band;
        defects.push_back(d);
    }
    return defects;
}

double lorentzian(double detuning, double amplitude, double width) {
    const double w2 = width * width;
    return amplitude * w2 / (detuning * detuning + w2);
}

}  // namespace

DefectLandscape DefectLandscape::sample(const ProcessorGraph& graph, const RunConfig& config) {
    DefectLandscape landscape;
    landscape.defects_.resize(graph.size());
    for (const GraphElement& e : graph.elements()) {
        if (e.is_node()) {
            landscape.defects_[static_cast<std::size_t>(e.id)] =
                sample_defects(config, e.id, /*epoch=*/0);
        }
    }
    return landscape;
}

void DefectLandscape::resample(const ProcessorGraph& graph, const RunConfig& config,
                               ElementId element, int epoch) {
    if (!graph.element(element).is_node()) {
        return;  // edges carry no landscape of their own
    }
    defects_[static_cast<std::size_t>(element)] = sample_defects(config, element, epoch);
}

std::span<const Defect> DefectLandscape::defects(ElementId element) const {
    return defects_[static_cast<std::size_t>(element)];
}

void DefectLandscape::set_defects(ElementId element, std::vector<Defect> defects) {
    if (defects_.size() <= static_cast<std::size_t>(element)) {
        defects_.resize(static_cast<std::size_t>(element) + 1);
    }
    defects_[static_cast<std::size_t>(element)] = std::move(defects);
}

PenaltyConfig penalty_config(const RunConfig& config) {
    PenaltyConfig pen;
    pen.a_xt = config.a_xt;
    pen.gamma_xt = config.gamma_xt;
    pen.beta = config.beta;
    pen.delta_hard = config.delta_hard;
    pen.d_hard = config.d_hard;
    pen.couple_node_edge = config.couple_node_edge;
    pen.c_traj = config.c_traj;
    return pen;
}

ModelParams model_params(const RunConfig& config) {
    ModelParams params;
    params.eps0 = config.eps0;
    params.eps1 = config.eps1;
    params.penalty = penalty_config(config);
    return params;
}

double element_error(const ProcessorGraph& graph, ElementId element, double f,
                     const DefectLandscape& landscape, const ModelParams& params) {
    const GraphElement& e = graph.element(element);
    if (e.is_parasitic()) {
        throw ContractViolation("parasitic edges have no error curve");
    }
    auto node_curve = [&](ElementId node) {
        double err = params.eps0;
        for (const Defect& d : landscape.defects(node)) {
            err += lorentzian(f - d.center, d.amplitude, d.width);
        }
        return err;
    };
    if (e.is_node()) {
        return node_curve(element);
    }
    return params.eps1 + 0.5 * (node_curve(e.node_a) + node_curve(e.node_b));
}

double pair_penalty(const GraphElement& g, const GraphElement& h, double x, double y, int distance,
                    const PenaltyConfig& penalty) {
    return pair_penalty_detuned(g, h, x - y, distance, penalty);
}

double pair_penalty_detuned(const GraphElement& g, const GraphElement& h, double detuning,
                            int distance, const PenaltyConfig& penalty) {
    if (distance < 1) {
        throw ContractViolation("pair penalty requires distinct elements (distance >= 1)");
    }
    const double attenuation = penalty.a_xt * std::pow(penalty.beta, distance);
    double value = lorentzian(detuning, attenuation, penalty.gamma_xt);
    if (penalty.couple_node_edge) {
        const bool node_edge_pair =
            (g.is_node() && h.is_engineered() && h.has_endpoint(g.id)) ||
            (h.is_node() && g.is_engineered() && g.has_endpoint(h.id));
        if (node_edge_pair) {
            value += penalty.c_traj * detuning * detuning;
        }
    }
    return value;
}

bool hard_feasible(double x, double y, int distance, bool co_active,
                   const PenaltyConfig& penalty) {
    if (!co_active || distance > penalty.d_hard) {
        return true;
    }
    return std::abs(x - y) >= penalty.delta_hard;
}

double LocalObjective::pair_value(const PairTerm& term, int vi, int vj) const {
    const double detuning = index_detuning(domain_, vi, vj);
    if (term.hard && detuning < penalty_.delta_hard) {
        return kInf;
    }
    double value = lorentzian(detuning, term.attenuation, penalty_.gamma_xt);
    if (term.couples) {
        value += penalty_.c_traj * detuning * detuning;
    }
    return value;
}

double LocalObjective::evaluate(std::span<const int> indices) const {
    double total = 0.0;
    for (std::size_t i = 0; i < params_.size(); ++i) {
        total += coord_cost_[i][static_cast<std::size_t>(indices[i])];
    }
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
        const PairTerm& term = pairs_[p];
        const int vi = indices[static_cast<std::size_t>(term.i)];
        const int vj = indices[static_cast<std::size_t>(term.j)];
        if (!pair_tables_.empty() && !pair_tables_[p].empty()) {
            total += pair_tables_[p][static_cast<std::size_t>(vi) *
                                         static_cast<std::size_t>(domain_.k) +
                                     static_cast<std::size_t>(vj)];
        } else {
            total += pair_value(term, vi, vj);
        }
    }
    return total;
}

bool LocalObjective::feasible(std::span<const int> indices) const {
    return std::isfinite(evaluate(indices));
}

double LocalObjective::coordinate_cost(int i, int v, std::span<const int> indices) const {
    double total = coord_cost_[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
        const PairTerm& term = pairs_[p];
        int vi;
        int vj;
        if (term.i == i) {
            vi = v;
            vj = indices[static_cast<std::size_t>(term.j)];
        } else if (term.j == i) {
            vi = indices[static_cast<std::size_t>(term.i)];
            vj = v;
        } else {
            continue;
        }
        if (!pair_tables_.empty() && !pair_tables_[p].empty()) {
            total += pair_tables_[p][static_cast<std::size_t>(vi) *
                                         static_cast<std::size_t>(domain_.k) +
                                     static_cast<std::size_t>(vj)];
        } else {
            total += pair_value(term, vi, vj);
        }
    }
    return total;
}

double LocalObjective::partial_coordinate_cost(int i, int v, std::span<const int> indices,
                                               int placed) const {
    double total = coord_cost_[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
        const PairTerm& term = pairs_[p];
        int vi;
        int vj;
        if (term.i == i && term.j < placed) {
            vi = v;
            vj = indices[static_cast<std::size_t>(term.j)];
        } else if (term.j == i && term.i < placed) {
            vi = indices[static_cast<std::size_t>(term.i)];
            vj = v;
        } else {
            continue;
        }
        total += pair_value(term, vi, vj);
    }
    return total;
}

bool LocalObjective::coordinate_has_feasible_option(int i) const {
    for (double cost : coord_cost_[static_cast<std::size_t>(i)]) {
        if (std::isfinite(cost)) {
            return true;
        }
    }
    return false;
}

std::vector<ElementId> LocalObjective::hard_blockers(int i) const {
    return hard_blockers_[static_cast<std::size_t>(i)];
}

LocalObjective build_error_model(std::span<const ElementId> params,
                                 std::span<const ElementId> constraints,
                                 const CalibrationData& data, const ProcessorGraph& graph,
                                 const ActivitySet& activity, int d_r,
                                 const FrequencyDomain& domain, const ModelParams& params_in) {
    if (params.empty()) {
        throw ContractViolation("error model needs at least one parameter element");
    }
    if (data.landscape == nullptr) {
        throw ContractViolation("error model needs a defect landscape");
    }
    LocalObjective obj;
    obj.params_.assign(params.begin(), params.end());
    std::sort(obj.params_.begin(), obj.params_.end());
    obj.domain_ = domain;
    obj.penalty_ = params_in.penalty;

    const int n = obj.dimension();
    const int k = domain.k;
    obj.coord_cost_.assign(static_cast<std::size_t>(n), {});
    obj.hard_blockers_.assign(static_cast<std::size_t>(n), {});

    // Distances from each parameter element out to the constraint radius.
    std::vector<std::vector<Neighbor>> hoods;
    hoods.reserve(static_cast<std::size_t>(n));
    const int reach = std::max(d_r, params_in.penalty.d_hard);
    for (ElementId p : obj.params_) {
        hoods.push_back(graph.neighborhood(p, reach));
    }
    auto distance_of = [&](int i, ElementId target) -> int {
        for (const Neighbor& nb : hoods[static_cast<std::size_t>(i)]) {
            if (nb.id == target) {
                return nb.distance;
            }
        }
        return -1;  // beyond reach
    };

    // Per-coordinate tables: intrinsic curve plus folded fixed-constraint
    // terms and their hard masks.
    for (int i = 0; i < n; ++i) {
        const ElementId p = obj.params_[static_cast<std::size_t>(i)];
        auto& table = obj.coord_cost_[static_cast<std::size_t>(i)];
        table.resize(static_cast<std::size_t>(k));
        for (int v = 0; v < k; ++v) {
            table[static_cast<std::size_t>(v)] =
                element_error(graph, p, domain.value(v), *data.landscape, params_in);
        }
        for (ElementId r : constraints) {
            if (!activity.co_active(p, r)) {
                continue;
            }
            const int dist = distance_of(i, r);
            if (dist < 1 || dist > d_r) {
                continue;
            }
            const auto fixed = data.fixed_indices.find(r);
            if (fixed == data.fixed_indices.end()) {
                throw ContractViolation("constraint element has no fixed assignment: " +
                                        graph.element_name(r));
            }
            ++obj.constraint_terms_;
            const bool hard = dist <= params_in.penalty.d_hard;
            if (hard) {
                obj.hard_blockers_[static_cast<std::size_t>(i)].push_back(r);
            }
            const GraphElement& ge = graph.element(p);
            const GraphElement& he = graph.element(r);
            for (int v = 0; v < k; ++v) {
                const double detuning = index_detuning(domain, v, fixed->second);
                if (hard && detuning < params_in.penalty.delta_hard) {
                    table[static_cast<std::size_t>(v)] = kInf;
                    continue;
                }
                table[static_cast<std::size_t>(v)] +=
                    pair_penalty_detuned(ge, he, detuning, dist, params_in.penalty);
            }
        }
    }

    // Unordered P-P pair terms.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const ElementId a = obj.params_[static_cast<std::size_t>(i)];
            const ElementId b = obj.params_[static_cast<std::size_t>(j)];
            if (!activity.co_active(a, b)) {
                continue;
            }
            const int dist = distance_of(i, b);
            if (dist < 1 || dist > d_r) {
                continue;
            }
            LocalObjective::PairTerm term;
            term.i = i;
            term.j = j;
            term.attenuation = params_in.penalty.a_xt * std::pow(params_in.penalty.beta, dist);
            term.hard = dist <= params_in.penalty.d_hard;
            const GraphElement& ge = graph.element(a);
            const GraphElement& he = graph.element(b);
            term.couples = params_in.penalty.couple_node_edge &&
                           ((ge.is_node() && he.is_engineered() && he.has_endpoint(a)) ||
                            (he.is_node() && ge.is_engineered() && ge.has_endpoint(b)));
            if (term.hard) {
                obj.hard_blockers_[static_cast<std::size_t>(i)].push_back(b);
                obj.hard_blockers_[static_cast<std::size_t>(j)].push_back(a);
            }
            obj.pairs_.push_back(term);
        }
    }

    // k x k tables per pair when the memory cost is trivial.
    const std::size_t table_cells = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
    if (!obj.pairs_.empty() && table_cells * obj.pairs_.size() <= (1u << 21)) {
        obj.pair_tables_.resize(obj.pairs_.size());
        for (std::size_t p = 0; p < obj.pairs_.size(); ++p) {
            auto& table = obj.pair_tables_[p];
            table.resize(table_cells);
            for (int vi = 0; vi < k; ++vi) {
                for (int vj = 0; vj < k; ++vj) {
                    table[static_cast<std::size_t>(vi) * static_cast<std::size_t>(k) +
                          static_cast<std::size_t>(vj)] = obj.pair_value(obj.pairs_[p], vi, vj);
                }
            }
        }
    }
    return obj;
}

namespace {

std::uint64_t saturating_pow(std::uint64_t base, int exp) {
    std::uint64_t result = 1;
    for (int i = 0; i < exp; ++i) {
        if (result > (std::numeric_limits<std::uint64_t>::max() / std::max<std::uint64_t>(base, 1))) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        result *= base;
    }
    return result;
}

[[noreturn]] void raise_infeasible(const LocalObjective& objective) {
    // Prefer a coordinate with no singleton-feasible option; otherwise report
    // the first coordinate and every hard partner involved.
    int worst = 0;
    for (int i = 0; i < objective.dimension(); ++i) {
        if (!objective.coordinate_has_feasible_option(i)) {
            worst = i;
            break;
        }
    }
    const ElementId element = objective.parameters()[static_cast<std::size_t>(worst)];
    std::vector<ElementId> blocking = objective.hard_blockers(worst);
    std::sort(blocking.begin(), blocking.end());
    blocking.erase(std::unique(blocking.begin(), blocking.end()), blocking.end());
    std::ostringstream os;
    os << "infeasible step: no assignment of element " << element
       << " satisfies the hard detuning bounds";
    if (!blocking.empty()) {
        os << " (blocked by";
        for (ElementId b : blocking) {
            os << ' ' << b;
        }
        os << ")";
    }
    os << "; increase k or reduce delta_hard";
    throw InfeasibleStepError(element, std::move(blocking), os.str());
}

OptimizeResult exhaustive_search(const LocalObjective& objective) {
    const int n = objective.dimension();
    const int k = objective.domain().k;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<int> best_idx;
    double best = kInf;
    // Odometer with the last coordinate fastest enumerates assignments in
    // lexicographic order; strict improvement keeps the first (smallest)
    // minimizer.
    while (true) {
        const double value = objective.evaluate(idx);
        if (value < best) {
            best = value;
            best_idx = idx;
        }
        int pos = n - 1;
        while (pos >= 0) {
            if (++idx[static_cast<std::size_t>(pos)] < k) {
                break;
            }
            idx[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) {
            break;
        }
    }
    if (!std::isfinite(best)) {
        raise_infeasible(objective);
    }
    return OptimizeResult{std::move(best_idx), best, true};
}

// Greedy coordinate-by-coordinate construction: each coordinate takes its
// cheapest value given the ones already placed. Returns an empty vector when
// some coordinate has no finite option.
std::vector<int> greedy_start(const LocalObjective& objective) {
    const int n = objective.dimension();
    const int k = objective.domain().k;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        double best = kInf;
        int best_v = -1;
        for (int v = 0; v < k; ++v) {
            const double cost = objective.partial_coordinate_cost(i, v, idx, i);
            if (cost < best) {
                best = cost;
                best_v = v;
            }
        }
        if (best_v < 0 || !std::isfinite(best)) {
            return {};
        }
        idx[static_cast<std::size_t>(i)] = best_v;
    }
    if (!objective.feasible(idx)) {
        return {};
    }
    return idx;
}

void sweep_to_convergence(const LocalObjective& objective, std::vector<int>& idx) {
    const int n = objective.dimension();
    const int k = objective.domain().k;
    for (int sweep = 0; sweep < 256; ++sweep) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            double best = objective.coordinate_cost(i, idx[static_cast<std::size_t>(i)], idx);
            int best_v = idx[static_cast<std::size_t>(i)];
            for (int v = 0; v < k; ++v) {
                const double cost = objective.coordinate_cost(i, v, idx);
                if (cost < best) {
                    best = cost;
                    best_v = v;
                }
            }
            if (best_v != idx[static_cast<std::size_t>(i)]) {
                idx[static_cast<std::size_t>(i)] = best_v;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
    }
}

OptimizeResult coordinate_descent(const LocalObjective& objective, int n_restarts,
                                  std::uint64_t seed) {
    const int n = objective.dimension();
    const int k = objective.domain().k;
    std::vector<int> best_idx;
    double best = kInf;

    std::vector<std::vector<int>> starts;
    if (std::vector<int> greedy = greedy_start(objective); !greedy.empty()) {
        starts.push_back(std::move(greedy));
    }
    for (int r = 0; r < n_restarts; ++r) {
        Rng rng = Rng::keyed({seed, 0xC0DE, static_cast<std::uint64_t>(r)});
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::vector<int> idx(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                idx[static_cast<std::size_t>(i)] = rng.uniform_int(0, k - 1);
            }
            if (objective.feasible(idx)) {
                starts.push_back(std::move(idx));
                break;
            }
        }
    }
    if (starts.empty()) {
        raise_infeasible(objective);
    }
    for (auto& idx : starts) {
        sweep_to_convergence(objective, idx);
        const double value = objective.evaluate(idx);
        if (value < best) {
            best = value;
            best_idx = idx;
        }
    }
    if (!std::isfinite(best)) {
        raise_infeasible(objective);
    }
    return OptimizeResult{std::move(best_idx), best, false};
}

}  // namespace

OptimizeResult optimize_error_model(const LocalObjective& objective, std::uint64_t budget,
                                    int n_restarts, std::uint64_t seed) {
    if (objective.dimension() < 1) {
        throw ContractViolation("objective has no parameters");
    }
    const std::uint64_t space =
        saturating_pow(static_cast<std::uint64_t>(objective.domain().k), objective.dimension());
    if (space <= budget) {
        return exhaustive_search(objective);
    }
    return coordinate_descent(objective, n_restarts, seed);
}

}  // namespace snake
