// Command-line front end: run experiment sweeps, reproduce the built-in
// figure presets, or run the numerical self-check suite.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "seqmimo/config_io.hpp"
#include "seqmimo/experiment.hpp"
#include "seqmimo/selfcheck.hpp"

namespace {

constexpr int kExitBadConfig = 2;
constexpr int kExitInfeasible = 3;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_path;
    std::string format = "csv";
    std::int64_t trials = -1;
    std::int64_t seed = -1;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "config file (key = value lines)");
    cmd->add_option("--set", args.overrides, "override, key=value (repeatable)")
        ->take_all();
    cmd->add_option("-o,--output", args.output_path, "output file (default: stdout)");
    cmd->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"csv", "plotdata"}));
    cmd->add_option("--trials", args.trials, "Monte-Carlo trials per point");
    cmd->add_option("--seed", args.seed, "base seed");
    cmd->add_option("-j,--jobs", args.jobs, "worker threads (1 = serial)");
}

std::string resolve_output(const std::string& path) {
    if (path.empty()) return path;
    if (path.find('/') == std::string::npos) {
        if (const char* dir = std::getenv("SEQMIMO_OUTPUT_DIR")) {
            return std::string(dir) + "/" + path;
        }
    }
    return path;
}

int execute(seqmimo::ExperimentSpec spec, const CommonArgs& args) {
    if (!args.config_path.empty()) {
        seqmimo::apply_config_file(spec, args.config_path);
    }
    for (const std::string& ov : args.overrides) {
        seqmimo::apply_override(spec, ov);
    }
    if (args.trials >= 0) spec.num_trials = args.trials;
    if (args.seed >= 0) spec.base_seed = static_cast<std::uint64_t>(args.seed);

    const seqmimo::SEReport report =
        seqmimo::run_experiment(spec, seqmimo::RunOptions{args.jobs});

    const seqmimo::ReportFormat fmt = args.format == "plotdata"
                                          ? seqmimo::ReportFormat::PlotData
                                          : seqmimo::ReportFormat::Csv;
    const std::string out = resolve_output(args.output_path);
    if (out.empty()) {
        seqmimo::emit_report(report, std::cout, fmt);
    } else {
        seqmimo::emit_report(report, out, fmt);
        std::size_t flagged = 0;
        for (const auto& row : report.rows) flagged += row.feasible ? 0 : 1;
        std::cerr << "wrote " << report.rows.size() << " rows to " << out;
        if (flagged) std::cerr << " (" << flagged << " infeasible, flagged)";
        std::cerr << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cell-free massive MIMO uplink simulator with sequential fronthaul "
                 "and per-AP memory limits"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run = app.add_subcommand("run", "run a sweep from a config file and overrides");
    add_common(run, run_args);

    CommonArgs fig_args;
    std::string figure_name;
    bool desk = false;
    CLI::App* figure = app.add_subcommand("figure", "run a built-in figure preset");
    figure->add_option("name", figure_name, "preset name (Fig3..Fig10, Custom)")->required();
    figure->add_flag("--desk", desk, "scaled-down variant for quick runs");
    add_common(figure, fig_args);

    std::int64_t check_seed = 7;
    CLI::App* check = app.add_subcommand("check", "run the numerical self-check suite");
    check->add_option("--seed", check_seed, "seed for the random property checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadConfig;
    }

    try {
        if (run->parsed()) {
            return execute(seqmimo::ExperimentSpec{}, run_args);
        }
        if (figure->parsed()) {
            return execute(seqmimo::figure_preset(figure_name, desk), fig_args);
        }
        if (check->parsed()) {
            bool all_pass = true;
            for (const auto& res :
                 seqmimo::run_self_checks(static_cast<std::uint64_t>(check_seed))) {
                std::cout << (res.pass ? "PASS " : "FAIL ") << res.name << " (" << res.detail
                          << ")\n";
                all_pass = all_pass && res.pass;
            }
            return all_pass ? 0 : 1;
        }
    } catch (const seqmimo::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const seqmimo::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
