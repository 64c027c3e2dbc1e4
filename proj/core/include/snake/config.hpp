#pragma once

#include <cstdint>
#include <string>

namespace snake {

enum class AlgorithmMode : std::uint8_t { kXeb, kUnstructured };
enum class Heuristic : std::uint8_t { kInsertionOrder, kRandom, kMostCalibratedNeighbors };
enum class TraversalOrder : std::uint8_t { kDepthFirst, kBreadthFirst };

const char* to_string(AlgorithmMode mode);
const char* to_string(Heuristic heuristic);
const char* to_string(TraversalOrder order);

/// The evenly spaced frequency options available to every goal element.
/// Assignments are stored as grid indices; values exist only transiently
/// inside error evaluations.
struct FrequencyDomain {
    int k = 1;
    double f_min = 0.0;
    double f_max = 0.0;

    double band() const { return f_max - f_min; }
    double spacing() const { return k > 1 ? band() / (k - 1) : band(); }
    double value(int index) const { return f_min + spacing() * index; }
};

/// Full run configuration. Fields with a negative default are resolved by
/// validate_and_resolve(): d_disc defaults to d_r, gamma_xt to 1% of the
/// frequency band, delta_hard to two frequency grid steps (zero when k = 1,
/// where no spacing exists).
struct RunConfig {
    int rows = 4;
    int cols = 4;
    AlgorithmMode algorithm = AlgorithmMode::kXeb;

    // Distances, in meta-steps of the incidence metric. One lattice hop
    // between nodes costs two meta-steps (node -> edge -> node).
    int d_p = 1;
    int d_t = 4;
    int d_r = 4;
    int d_disc = -1;

    Heuristic heuristic = Heuristic::kRandom;
    TraversalOrder traversal_order = TraversalOrder::kDepthFirst;

    int k = 100;
    double f_min = 5.0;
    double f_max = 7.0;

    // Synthetic error-model constants (dimensionless error-per-gate scale).
    double eps0 = 1e-3;
    double eps1 = 4e-3;
    double defect_lambda = 2.0;
    double a_xt = 0.01;
    double gamma_xt = -1.0;
    double beta = 0.5;
    double delta_hard = -1.0;
    int d_hard = 2;
    bool couple_node_edge = false;
    double c_traj = 0.1;

    std::uint64_t budget = 1ull << 20;
    int n_restarts = 8;

    std::uint64_t seed = 1;
    bool parallel = false;

    FrequencyDomain domain() const { return FrequencyDomain{k, f_min, f_max}; }
};

/// Validates ranges and resolves defaulted fields in place. Throws
/// ConfigError (line 0) on any violation.
void validate_and_resolve(RunConfig& config);

/// Parses flat "key = value" text with '#' comments. Unknown keys, duplicate
/// keys, malformed or out-of-range values raise ConfigError naming the line
/// and key. The returned config is resolved.
RunConfig parse_config(const std::string& text);

/// Canonical text rendering of a resolved config: every key on its own line,
/// in a fixed order, with exact value formatting. Equal configs (after
/// resolution) produce equal text.
std::string canonical_config_text(const RunConfig& config);

/// Stable 64-bit digest of the canonical text; embedded in database headers
/// so downstream commands can refuse mismatched configs.
std::uint64_t config_digest(const RunConfig& config);

}  // namespace snake
