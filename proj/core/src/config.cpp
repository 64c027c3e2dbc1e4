#include "snake/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>
#include <string_view>

#include "snake/errors.hpp"

namespace snake {
namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& what) {
    std::ostringstream os;
    os << "config error";
    if (line > 0) {
        os << " at line " << line;
    }
    if (!key.empty()) {
        os << " (key '" << key << "')";
    }
    os << ": " << what;
    throw ConfigError(line, key, os.str());
}

long long parse_int(int line, const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0') {
        fail(line, key, "expected an integer, got '" + value + "'");
    }
    return v;
}

std::uint64_t parse_u64(int line, const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0' || value.front() == '-') {
        fail(line, key, "expected a non-negative integer, got '" + value + "'");
    }
    return v;
}

double parse_double(int line, const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0') {
        fail(line, key, "expected a number, got '" + value + "'");
    }
    return v;
}

bool parse_bool(int line, const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") {
        return true;
    }
    if (value == "false" || value == "0") {
        return false;
    }
    fail(line, key, "expected true/false, got '" + value + "'");
}

int parse_range_int(int line, const std::string& key, const std::string& value, long long lo,
                    long long hi) {
    const long long v = parse_int(line, key, value);
    if (v < lo || v > hi) {
        std::ostringstream os;
        os << "value " << v << " out of range [" << lo << ", " << hi << "]";
        fail(line, key, os.str());
    }
    return static_cast<int>(v);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

const char* to_string(AlgorithmMode mode) {
    return mode == AlgorithmMode::kXeb ? "xeb" : "unstructured";
}

const char* to_string(Heuristic heuristic) {
    switch (heuristic) {
        case Heuristic::kInsertionOrder:
            return "insertion-order";
        case Heuristic::kRandom:
            return "random";
        case Heuristic::kMostCalibratedNeighbors:
            return "most-calibrated-neighbors";
    }
    return "?";
}

const char* to_string(TraversalOrder order) {
    return order == TraversalOrder::kDepthFirst ? "depth-first" : "breadth-first";
}

void validate_and_resolve(RunConfig& config) {
    auto check = [](bool ok, const std::string& key, const std::string& what) {
        if (!ok) {
            fail(0, key, what);
        }
    };
    check(config.rows >= 1, "rows", "must be >= 1");
    check(config.cols >= 1, "cols", "must be >= 1");
    check(config.d_p >= 0, "d_p", "must be >= 0");
    check(config.d_t >= 0, "d_t", "must be >= 0");
    check(config.d_r >= 0, "d_r", "must be >= 0");
    check(config.k >= 1, "k", "must be >= 1");
    check(config.f_max > config.f_min, "f_max", "frequency band must be non-empty");
    check(config.eps0 > 0.0, "eps0", "must be > 0");
    check(config.eps1 >= 0.0, "eps1", "must be >= 0");
    check(config.defect_lambda >= 0.0, "defect_lambda", "must be >= 0");
    check(config.a_xt > 0.0, "a_xt", "must be > 0");
    check(config.beta > 0.0 && config.beta <= 1.0, "beta", "must be in (0, 1]");
    check(config.d_hard >= 0, "d_hard", "must be >= 0");
    check(config.c_traj >= 0.0, "c_traj", "must be >= 0");
    check(config.budget >= 1, "budget", "must be >= 1");
    check(config.n_restarts >= 1, "n_restarts", "must be >= 1");

    if (config.d_disc < 0) {
        config.d_disc = config.d_r;
    }
    const FrequencyDomain domain = config.domain();
    if (config.gamma_xt < 0.0) {
        config.gamma_xt = 0.01 * domain.band();
    }
    check(config.gamma_xt > 0.0, "gamma_xt", "must be > 0");
    if (config.delta_hard < 0.0) {
        // Two frequency grid steps; with a single option there is no spacing
        // and the hard bound is disabled.
        config.delta_hard = config.k > 1 ? 2.0 * domain.spacing() : 0.0;
    }
    check(config.delta_hard < domain.band(), "delta_hard",
          "must be smaller than the frequency band");
    // The per-step constraint scope must cover the hard-bound scope, or the
    // engine could not guarantee globally feasible output.
    check(config.d_hard <= config.d_r, "d_hard", "must be <= d_r");
}

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const std::size_t hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            fail(line_no, "", "expected 'key = value', got '" + trim(raw) + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            fail(line_no, key, "expected 'key = value'");
        }
        if (!seen.insert(key).second) {
            fail(line_no, key, "duplicate key");
        }

        if (key == "rows") {
            config.rows = parse_range_int(line_no, key, value, 1, 1 << 14);
        } else if (key == "cols") {
            config.cols = parse_range_int(line_no, key, value, 1, 1 << 14);
        } else if (key == "algorithm") {
            if (value == "xeb") {
                config.algorithm = AlgorithmMode::kXeb;
            } else if (value == "unstructured") {
                config.algorithm = AlgorithmMode::kUnstructured;
            } else {
                fail(line_no, key, "expected xeb|unstructured, got '" + value + "'");
            }
        } else if (key == "d_p") {
            config.d_p = parse_range_int(line_no, key, value, 0, 1 << 20);
        } else if (key == "d_t") {
            config.d_t = parse_range_int(line_no, key, value, 0, 1 << 20);
        } else if (key == "d_r") {
            config.d_r = parse_range_int(line_no, key, value, 0, 1 << 20);
        } else if (key == "d_disc") {
            config.d_disc = parse_range_int(line_no, key, value, 0, 1 << 20);
        } else if (key == "heuristic") {
            if (value == "insertion-order") {
                config.heuristic = Heuristic::kInsertionOrder;
            } else if (value == "random") {
                config.heuristic = Heuristic::kRandom;
            } else if (value == "most-calibrated-neighbors") {
                config.heuristic = Heuristic::kMostCalibratedNeighbors;
            } else {
                fail(line_no, key,
                     "expected insertion-order|random|most-calibrated-neighbors, got '" + value +
                         "'");
            }
        } else if (key == "traversal_order") {
            if (value == "depth-first") {
                config.traversal_order = TraversalOrder::kDepthFirst;
            } else if (value == "breadth-first") {
                config.traversal_order = TraversalOrder::kBreadthFirst;
            } else {
                fail(line_no, key, "expected depth-first|breadth-first, got '" + value + "'");
            }
        } else if (key == "k") {
            config.k = parse_range_int(line_no, key, value, 1, 1 << 24);
        } else if (key == "f_min") {
            config.f_min = parse_double(line_no, key, value);
        } else if (key == "f_max") {
            config.f_max = parse_double(line_no, key, value);
        } else if (key == "eps0") {
            config.eps0 = parse_double(line_no, key, value);
        } else if (key == "eps1") {
            config.eps1 = parse_double(line_no, key, value);
        } else if (key == "defect_lambda") {
            config.defect_lambda = parse_double(line_no, key, value);
        } else if (key == "a_xt") {
            config.a_xt = parse_double(line_no, key, value);
        } else if (key == "gamma_xt") {
            config.gamma_xt = parse_double(line_no, key, value);
        } else if (key == "beta") {
            config.beta = parse_double(line_no, key, value);
        } else if (key == "delta_hard") {
            config.delta_hard = parse_double(line_no, key, value);
        } else if (key == "d_hard") {
            config.d_hard = parse_range_int(line_no, key, value, 0, 1 << 20);
        } else if (key == "couple_node_edge") {
            config.couple_node_edge = parse_bool(line_no, key, value);
        } else if (key == "c_traj") {
            config.c_traj = parse_double(line_no, key, value);
        } else if (key == "budget") {
            config.budget = parse_u64(line_no, key, value);
        } else if (key == "n_restarts") {
            config.n_restarts = parse_range_int(line_no, key, value, 1, 1 << 20);
        } else if (key == "seed") {
            config.seed = parse_u64(line_no, key, value);
        } else if (key == "parallel") {
            config.parallel = parse_bool(line_no, key, value);
        } else {
            fail(line_no, key, "unknown key");
        }

    }
    validate_and_resolve(config);
    return config;
}

std::string canonical_config_text(const RunConfig& c) {
    std::ostringstream os;
    os << "rows = " << c.rows << '\n';
    os << "cols = " << c.cols << '\n';
    os << "algorithm = " << to_string(c.algorithm) << '\n';
    os << "d_p = " << c.d_p << '\n';
    os << "d_t = " << c.d_t << '\n';
    os << "d_r = " << c.d_r << '\n';
    os << "d_disc = " << c.d_disc << '\n';
    os << "heuristic = " << to_string(c.heuristic) << '\n';
    os << "traversal_order = " << to_string(c.traversal_order) << '\n';
    os << "k = " << c.k << '\n';
    os << "f_min = " << format_double(c.f_min) << '\n';
    os << "f_max = " << format_double(c.f_max) << '\n';
    os << "eps0 = " << format_double(c.eps0) << '\n';
    os << "eps1 = " << format_double(c.eps1) << '\n';
    os << "defect_lambda = " << format_double(c.defect_lambda) << '\n';
    os << "a_xt = " << format_double(c.a_xt) << '\n';
    os << "gamma_xt = " << format_double(c.gamma_xt) << '\n';
    os << "beta = " << format_double(c.beta) << '\n';
    os << "delta_hard = " << format_double(c.delta_hard) << '\n';
    os << "d_hard = " << c.d_hard << '\n';
    os << "couple_node_edge = " << (c.couple_node_edge ? "true" : "false") << '\n';
    os << "c_traj = " << format_double(c.c_traj) << '\n';
    os << "budget = " << c.budget << '\n';
    os << "n_restarts = " << c.n_restarts << '\n';
    os << "seed = " << c.seed << '\n';
    return os.str();
}

std::uint64_t config_digest(const RunConfig& config) {
    // FNV-1a over the canonical text. The parallel flag is execution policy,
    // not problem identity, and is deliberately left out (canonical text
    // stops at 'seed').
    const std::string text = canonical_config_text(config);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace snake
