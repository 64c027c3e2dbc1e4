#include "snake/database.hpp"

#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "snake/config.hpp"
#include "snake/errors.hpp"

namespace snake {
namespace {

constexpr int kFormatVersion = 1;

std::string format_objective(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void corrupt(const std::string& what) {
    throw IoError("database file: " + what);
}

// Reads the next non-blank, non-comment line; false at end of input.
bool next_line(std::istringstream& in, std::string& line) {
    while (std::getline(in, line)) {
        std::size_t b = 0;
        while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) {
            ++b;
        }
        if (b == line.size() || line[b] == '#') {
            continue;
        }
        return true;
    }
    return false;
}

std::string expect_key(std::istringstream& in, const std::string& key) {
    std::string line;
    if (!next_line(in, line)) {
        corrupt("truncated header (missing '" + key + "')");
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
        corrupt("malformed header line '" + line + "'");
    }
    std::istringstream ks(line.substr(0, eq));
    std::string found;
    ks >> found;
    if (found != key) {
        corrupt("expected header key '" + key + "', found '" + found + "'");
    }
    std::string value = line.substr(eq + 1);
    const std::size_t b = value.find_first_not_of(" \t");
    const std::size_t e = value.find_last_not_of(" \t\r");
    if (b == std::string::npos) {
        corrupt("empty value for header key '" + key + "'");
    }
    return value.substr(b, e - b + 1);
}

long long to_int(const std::string& value, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0') {
        corrupt("expected integer for " + what + ", got '" + value + "'");
    }
    return v;
}

}  // namespace

ParameterDatabaseFile snapshot_database(const CalibrationState& state) {
    ParameterDatabaseFile file;
    file.version = kFormatVersion;
    file.digest = config_digest(state.config);
    file.seed = state.config.seed;
    file.rows = state.config.rows;
    file.cols = state.config.cols;
    for (ElementId g : state.goal) {
        if (!state.is_calibrated(g)) {
            continue;
        }
        const DbEntry& entry = state.database[static_cast<std::size_t>(g)];
        DbRecord record;
        record.element = g;
        record.kind = state.graph->element(g).kind;
        record.freq_index = entry.freq_index;
        record.step = entry.step;
        record.objective = entry.objective;
        file.records.push_back(record);
    }
    return file;
}

std::string serialize_database(const ParameterDatabaseFile& file) {
    std::ostringstream os;
    char digest[24];
    std::snprintf(digest, sizeof(digest), "%016" PRIx64, file.digest);
    os << "# snake parameter database\n";
    os << "version = " << file.version << '\n';
    os << "digest = " << digest << '\n';
    os << "seed = " << file.seed << '\n';
    os << "rows = " << file.rows << '\n';
    os << "cols = " << file.cols << '\n';
    os << "records = " << file.records.size() << '\n';
    os << "# element kind freq_index step objective\n";
    for (const DbRecord& r : file.records) {
        os << r.element << ' ' << to_string(r.kind) << ' ' << r.freq_index << ' ' << r.step << ' '
           << format_objective(r.objective) << '\n';
    }
    return os.str();
}

ParameterDatabaseFile deserialize_database(const std::string& text) {
    std::istringstream in(text);
    ParameterDatabaseFile file;

    file.version = static_cast<int>(to_int(expect_key(in, "version"), "version"));
    if (file.version != kFormatVersion) {
        corrupt("unsupported version " + std::to_string(file.version) + " (expected " +
                std::to_string(kFormatVersion) + ")");
    }
    {
        const std::string hex = expect_key(in, "digest");
        errno = 0;
        char* end = nullptr;
        file.digest = std::strtoull(hex.c_str(), &end, 16);
        if (errno != 0 || end == hex.c_str() || *end != '\0') {
            corrupt("malformed digest '" + hex + "'");
        }
    }
    file.seed = static_cast<std::uint64_t>(to_int(expect_key(in, "seed"), "seed"));
    file.rows = static_cast<int>(to_int(expect_key(in, "rows"), "rows"));
    file.cols = static_cast<int>(to_int(expect_key(in, "cols"), "cols"));
    const long long count = to_int(expect_key(in, "records"), "records");
    if (count < 0) {
        corrupt("negative record count");
    }

    std::string line;
    for (long long i = 0; i < count; ++i) {
        if (!next_line(in, line)) {
            corrupt("truncated: expected " + std::to_string(count) + " records, found " +
                    std::to_string(i));
        }
        std::istringstream rs(line);
        DbRecord record;
        std::string kind;
        if (!(rs >> record.element >> kind >> record.freq_index >> record.step >>
              record.objective)) {
            corrupt("malformed record '" + line + "'");
        }
        std::string extra;
        if (rs >> extra) {
            corrupt("trailing fields in record '" + line + "'");
        }
        if (kind == "node") {
            record.kind = ElementKind::kNode;
        } else if (kind == "edge") {
            record.kind = ElementKind::kEngineeredEdge;
        } else {
            corrupt("unknown element kind '" + kind + "'");
        }
        file.records.push_back(record);
    }
    if (next_line(in, line)) {
        corrupt("trailing content after records: '" + line + "'");
    }
    return file;
}

void write_database(const CalibrationState& state, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << serialize_database(snapshot_database(state));
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

ParameterDatabaseFile read_database(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserialize_database(buffer.str());
}

void apply_database(CalibrationState& state, const ParameterDatabaseFile& file) {
    if (file.digest != config_digest(state.config)) {
        corrupt("config digest mismatch: the database was produced under a different config");
    }
    if (file.rows != state.config.rows || file.cols != state.config.cols ||
        file.seed != state.config.seed) {
        corrupt("header does not match the config (rows/cols/seed)");
    }
    std::vector<RestoredRecord> records;
    records.reserve(file.records.size());
    for (const DbRecord& r : file.records) {
        if (r.element < 0 || static_cast<std::size_t>(r.element) >= state.graph->size()) {
            corrupt("record element id out of range");
        }
        if (state.graph->element(r.element).kind != r.kind) {
            corrupt("record kind disagrees with the graph for element " +
                    std::to_string(r.element));
        }
        if (r.freq_index < 0 || r.freq_index >= state.config.k) {
            corrupt("record frequency index outside the domain");
        }
        records.push_back(RestoredRecord{r.element, r.freq_index, r.step, r.objective});
    }
    restore_status(state, records);
}

}  // namespace snake
