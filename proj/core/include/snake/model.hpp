#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "snake/algorithm.hpp"
#include "snake/config.hpp"
#include "snake/graph.hpp"
#include "snake/types.hpp"

namespace snake {

/// One Lorentzian error resonance: error A * w^2 / ((f - mu)^2 + w^2).
struct Defect {
    double center = 0.0;
    double amplitude = 0.0;
    double width = 0.0;
};

/// Synthetic per-node defect landscapes. The landscape of a node is a pure
/// function of (run seed, element id, epoch), so it is identical across runs
/// and independent of calibration order or scheduling. Edges have no
/// landscape of their own; their error curve averages the endpoint curves.
/// The epoch counter models drift: re-calibration bumps it for the expired
/// element, which resamples that landscape only.
class DefectLandscape {
public:
    static DefectLandscape sample(const ProcessorGraph& graph, const RunConfig& config);

    /// Resamples one element's defects for a new epoch. No-op for edges.
    void resample(const ProcessorGraph& graph, const RunConfig& config, ElementId element,
                  int epoch);

    std::span<const Defect> defects(ElementId element) const;

    /// Test hook: install an explicit defect list.
    void set_defects(ElementId element, std::vector<Defect> defects);

private:
    std::vector<std::vector<Defect>> defects_;
};

/// Pairwise interaction constants (soft crosstalk, hard detuning bounds and
/// the optional node-edge trajectory coupling).
struct PenaltyConfig {
    double a_xt = 0.01;       // crosstalk amplitude
    double gamma_xt = 0.02;   // crosstalk Lorentzian width, frequency units
    double beta = 0.5;        // attenuation per meta-step, in (0, 1]
    double delta_hard = 0.0;  // minimum detuning, frequency units
    int d_hard = 2;           // meta-distance within which the hard bound applies
    bool couple_node_edge = false;
    double c_traj = 0.1;
};

/// All model constants needed to evaluate errors.
struct ModelParams {
    double eps0 = 1e-3;  // node baseline error
    double eps1 = 4e-3;  // engineered-edge baseline error
    PenaltyConfig penalty;
};

PenaltyConfig penalty_config(const RunConfig& config);
ModelParams model_params(const RunConfig& config);

/// Intrinsic frequency-dependent error of one goal element:
///   node:            eps0 + sum of its Lorentzian defects at f
///   engineered edge: eps1 + (err(node_a, f) + err(node_b, f)) / 2
/// Querying a parasitic edge is a programming error. The edge curve depends
/// only on the edge's own frequency through the static endpoint curves, never
/// on the endpoints' chosen values, which keeps every step objective
/// well-defined regardless of calibration order.
double element_error(const ProcessorGraph& graph, ElementId element, double f,
                     const DefectLandscape& landscape, const ModelParams& params);

/// Smooth pairwise penalty between two elements at distance d >= 1:
///   a_xt * beta^d * gamma^2 / ((x - y)^2 + gamma^2)
/// plus c_traj * (x - y)^2 when trajectory coupling is enabled and the pair
/// is an engineered edge with one of its endpoint nodes. Symmetric under
/// swapping (g, x) <-> (h, y).
double pair_penalty(const GraphElement& g, const GraphElement& h, double x, double y, int distance,
                    const PenaltyConfig& penalty);

/// pair_penalty expressed in terms of the detuning x - y. Internal paths
/// compute detunings of on-grid assignments as |i - j| * spacing (one
/// rounding), so the closed hard-bound boundary |x - y| == delta_hard is hit
/// exactly and every evaluator agrees bit-for-bit.
double pair_penalty_detuned(const GraphElement& g, const GraphElement& h, double detuning,
                            int distance, const PenaltyConfig& penalty);

/// Exact detuning between two frequency grid indices.
inline double index_detuning(const FrequencyDomain& domain, int vi, int vj) {
    return (vi > vj ? vi - vj : vj - vi) * domain.spacing();
}

/// Hard detuning bound: false iff the pair is co-active, within d_hard, and
/// |x - y| < delta_hard. The bound is closed: |x - y| == delta_hard passes.
bool hard_feasible(double x, double y, int distance, bool co_active,
                   const PenaltyConfig& penalty);

/// Calibration data for one step: the defect landscape plus the fixed
/// frequency indices of every active constraint element.
struct CalibrationData {
    const DefectLandscape* landscape = nullptr;
    std::map<ElementId, int> fixed_indices;
};

/// The local objective of one calibration step over parameter elements P with
/// fixed constraint elements R:
///   J(x) = sum element_error(g, x_g)
///        + sum pair_penalty over co-active unordered P-P pairs within d_r
///        + sum pair_penalty over co-active P-R pairs within d_r
/// Hard-infeasible assignments evaluate to +infinity, so feasibility is
/// "evaluate(x) is finite". Construction folds constraint terms and hard
/// masks into per-coordinate tables; evaluation is pure.
class LocalObjective {
public:
    int dimension() const { return static_cast<int>(params_.size()); }
    std::span<const ElementId> parameters() const { return params_; }
    const FrequencyDomain& domain() const { return domain_; }

    std::size_t pair_term_count() const { return pairs_.size(); }
    std::size_t constraint_term_count() const { return constraint_terms_; }

    /// Total error of a full assignment (frequency grid indices, one per
    /// parameter in parameters() order); +infinity if hard-infeasible.
    double evaluate(std::span<const int> indices) const;

    bool feasible(std::span<const int> indices) const;

    /// Cost of coordinate i taking index v while the other coordinates hold
    /// the given values: the i-th per-coordinate table entry plus every pair
    /// term touching i. Total J differences between two values of coordinate
    /// i equal the differences of this function.
    double coordinate_cost(int i, int v, std::span<const int> indices) const;

    /// Like coordinate_cost, but only counts pair terms whose partner
    /// coordinate is below `placed`. Used while building assignments one
    /// coordinate at a time (fixed-constraint terms always count).
    double partial_coordinate_cost(int i, int v, std::span<const int> indices, int placed) const;

    /// Per-coordinate diagnostics for infeasibility reports: true iff some
    /// index of coordinate i survives the fixed-constraint hard masks.
    bool coordinate_has_feasible_option(int i) const;

    /// Elements responsible for hard terms on coordinate i (fixed constraints
    /// and parameter partners), for diagnostics.
    std::vector<ElementId> hard_blockers(int i) const;

private:
    friend LocalObjective build_error_model(std::span<const ElementId> params,
                                            std::span<const ElementId> constraints,
                                            const CalibrationData& data,
                                            const ProcessorGraph& graph,
                                            const ActivitySet& activity, int d_r,
                                            const FrequencyDomain& domain,
                                            const ModelParams& params_in);

    struct PairTerm {
        int i = 0;              // coordinate indices, i < j
        int j = 0;
        double attenuation = 0.0;  // a_xt * beta^d
        bool hard = false;         // within d_hard (pairs are co-active by construction)
        bool couples = false;      // node-edge trajectory coupling applies
    };

    double pair_value(const PairTerm& term, int vi, int vj) const;

    std::vector<ElementId> params_;
    FrequencyDomain domain_;
    PenaltyConfig penalty_;
    std::size_t constraint_terms_ = 0;
    // coord_cost_[i][v]: element error of params_[i] at option v plus all
    // folded fixed-constraint soft terms; +infinity where a fixed hard bound
    // blocks option v.
    std::vector<std::vector<double>> coord_cost_;
    std::vector<PairTerm> pairs_;
    // Optional k*k tables per pair term (built when small enough to pay off).
    std::vector<std::vector<double>> pair_tables_;
    std::vector<std::vector<ElementId>> hard_blockers_;
};

/// Builds the step objective. Every r in `constraints` must have a fixed
/// index in data.fixed_indices (missing entries are a configuration error).
LocalObjective build_error_model(std::span<const ElementId> params,
                                 std::span<const ElementId> constraints,
                                 const CalibrationData& data, const ProcessorGraph& graph,
                                 const ActivitySet& activity, int d_r,
                                 const FrequencyDomain& domain, const ModelParams& params_in);

struct OptimizeResult {
    std::vector<int> assignment;  // frequency grid indices, parameters() order
    double value = 0.0;
    bool exhaustive = false;
};

/// Minimizes a step objective. When k^|P| fits in the budget the search is
/// exhaustive with lexicographic tie-breaking; otherwise seeded coordinate
/// descent runs from n_restarts feasible starts and keeps the best local
/// minimum. Deterministic given the seed. Raises InfeasibleStepError when no
/// feasible assignment exists (or none could be constructed).
OptimizeResult optimize_error_model(const LocalObjective& objective, std::uint64_t budget,
                                    int n_restarts, std::uint64_t seed);

}  // namespace snake
