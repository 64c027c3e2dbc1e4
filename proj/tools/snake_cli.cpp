// Command-line front end: calibrate, recalibrate, oracle, validate, report.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "snake/database.hpp"
#include "snake/engine.hpp"
#include "snake/errors.hpp"
#include "snake/oracle.hpp"
#include "snake/report.hpp"

namespace {

// Exit codes: 0 ok, 1 usage/config/io error, 2 validation found violations,
// 3 calibration aborted on infeasible steps.
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kViolations = 2;
constexpr int kAborted = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw snake::IoError("cannot open '" + path + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw snake::IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw snake::IoError("failed writing '" + path + "'");
    }
}

snake::RunConfig load_config(const std::string& path) {
    return snake::parse_config(read_file(path));
}

int cmd_calibrate(const std::string& config_path, const std::string& out_path,
                  const std::string& report_path, bool parallel) {
    snake::RunConfig config = load_config(config_path);
    if (parallel) {
        config.parallel = true;
    }
    snake::CalibrationState state = snake::make_state(config);

    int exit_code = kOk;
    snake::RunSummary summary;
    const auto start = std::chrono::steady_clock::now();
    try {
        summary = snake::calibrate_graph(state);
    } catch (const snake::CalibrationAborted& e) {
        std::cerr << "snake: error: " << e.what() << "\n";
        summary = snake::fresh_segmentation_summary(config);
        exit_code = kAborted;
    }
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

    snake::write_database(state, out_path);
    if (!report_path.empty()) {
        write_file(report_path, snake::emit_report(state, summary, wall.count()));
    }
    if (exit_code == kOk) {
        std::cout << "calibrated " << state.calibrated_count() << " elements in "
                  << state.step_log.size() << " steps -> " << out_path << "\n";
    }
    return exit_code;
}

int cmd_recalibrate(const std::string& config_path, const std::string& db_path,
                    snake::ElementId element, int d_disc) {
    const snake::RunConfig config = load_config(config_path);
    snake::CalibrationState state = snake::make_state(config);
    snake::apply_database(state, snake::read_database(db_path));

    int exit_code = kOk;
    try {
        snake::recalibrate(state, element, d_disc);
    } catch (const snake::CalibrationAborted& e) {
        std::cerr << "snake: error: " << e.what() << "\n";
        exit_code = kAborted;
    }
    snake::write_database(state, db_path);
    if (exit_code == kOk) {
        std::cout << "re-calibrated around element " << element << " -> " << db_path << "\n";
    }
    return exit_code;
}

int cmd_oracle(const std::string& config_path) {
    const snake::RunConfig config = load_config(config_path);
    const snake::CalibrationState state = snake::make_state(config);
    const snake::BruteForceResult result = snake::global_brute_force(state, config.budget);
    std::cout << "# global optimum\n";
    for (std::size_t i = 0; i < state.goal.size(); ++i) {
        const snake::ElementId g = state.goal[i];
        std::cout << g << ' ' << snake::to_string(state.graph->element(g).kind) << ' '
                  << result.assignment.indices[i] << "\n";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", result.error);
    std::cout << "total_system_error = " << buf << "\n";
    return kOk;
}

int cmd_validate(const std::string& config_path, const std::string& db_path) {
    const snake::RunConfig config = load_config(config_path);
    snake::CalibrationState state = snake::make_state(config);
    snake::apply_database(state, snake::read_database(db_path));
    const snake::GlobalAssignment assignment = snake::assignment_from_state(state);
    const std::vector<snake::Violation> violations = snake::validate(state, assignment);
    if (violations.empty()) {
        std::cout << "validate: OK (0 violations)\n";
        return kOk;
    }
    std::cerr << "snake: error: " << violations.size() << " hard-bound violation(s)\n";
    for (const snake::Violation& v : violations) {
        std::cerr << "  " << state.graph->element_name(v.a) << " vs "
                  << state.graph->element_name(v.b) << " at distance " << v.distance
                  << ": detuning " << v.detuning << " < " << config.delta_hard << "\n";
    }
    return kViolations;
}

int cmd_report(const std::string& config_path, const std::string& db_path) {
    const snake::RunConfig config = load_config(config_path);
    snake::CalibrationState state = snake::make_state(config);
    snake::apply_database(state, snake::read_database(db_path));
    snake::reconstruct_step_log(state);
    const snake::RunSummary summary = snake::fresh_segmentation_summary(config);
    std::cout << snake::emit_report(state, summary, 0.0);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"snake graph-calibration engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::string db_path;
    std::string out_path;
    std::string report_path;
    bool parallel = false;
    snake::ElementId element = snake::kInvalidElement;
    int d_disc = -1;

    CLI::App* calibrate = app.add_subcommand("calibrate", "run full graph calibration");
    calibrate->add_option("--config", config_path, "config file")->required();
    calibrate->add_option("--out", out_path, "output parameter database")->required();
    calibrate->add_option("--report", report_path, "also write a run report");
    calibrate->add_flag("--parallel", parallel, "calibrate subgoals in parallel");

    CLI::App* recalibrate = app.add_subcommand("recalibrate", "locally re-calibrate one element");
    recalibrate->add_option("--config", config_path, "config file")->required();
    recalibrate->add_option("--db", db_path, "parameter database (updated in place)")->required();
    recalibrate->add_option("--element", element, "expired element id")->required();
    recalibrate->add_option("--d-disc", d_disc, "discard distance (default: config d_disc)");

    CLI::App* oracle = app.add_subcommand("oracle", "exhaustive global optimum (tiny instances)");
    oracle->add_option("--config", config_path, "config file")->required();

    CLI::App* validate = app.add_subcommand("validate", "check a database against hard bounds");
    validate->add_option("--config", config_path, "config file")->required();
    validate->add_option("--db", db_path, "parameter database")->required();

    CLI::App* report = app.add_subcommand("report", "rebuild the run report from a database");
    report->add_option("--config", config_path, "config file")->required();
    report->add_option("--db", db_path, "parameter database")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (calibrate->parsed()) {
            return cmd_calibrate(config_path, out_path, report_path, parallel);
        }
        if (recalibrate->parsed()) {
            return cmd_recalibrate(config_path, db_path, element, d_disc);
        }
        if (oracle->parsed()) {
            return cmd_oracle(config_path);
        }
        if (validate->parsed()) {
            return cmd_validate(config_path, db_path);
        }
        if (report->parsed()) {
            return cmd_report(config_path, db_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "snake: error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
