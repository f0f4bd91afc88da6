#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capsig/capsig.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> paths;
    std::optional<int> steps;
    std::string out_dir;
    std::string format;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_outputs) {
    cmd->add_option("scenario", opts.scenario_path, "Scenario file (TOML)")->required();
    cmd->add_option("--seed", opts.seed, "Override the scenario seed");
    cmd->add_option("--paths", opts.paths, "Override grid.n_paths");
    cmd->add_option("--steps", opts.steps, "Override grid.n_steps");
    if (with_outputs) {
        cmd->add_option("--out", opts.out_dir, "Output directory");
        cmd->add_option("--format", opts.format, "Report format: json|csv|both")
            ->check(CLI::IsMember({"json", "csv", "both"}));
    }
}

capsig::Scenario load_with_overrides(const CommonOptions& opts) {
    capsig::Scenario sc = capsig::load_scenario(opts.scenario_path);
    if (opts.seed) sc.grid.seed = *opts.seed;
    if (opts.paths) sc.grid.n_paths = *opts.paths;
    if (opts.steps) sc.grid.n_steps = *opts.steps;
    if (!opts.format.empty()) sc.outputs.format = opts.format;
    sc.validate();
    return sc;
}

std::filesystem::path resolve_out_dir(const CommonOptions& opts, const capsig::Scenario& sc) {
    if (!opts.out_dir.empty()) return opts.out_dir;
    if (!sc.outputs.directory.empty()) return sc.outputs.directory;
    if (const char* env = std::getenv("CAPSIG_OUT_DIR"); env && *env) return env;
    return ".";
}

void print_summary(const capsig::RunReport& report) {
    auto line = [](const char* label, double nosig, double sig) {
        std::printf("  %-22s %14.6f %14.6f\n", label, nosig, sig);
    };
    std::printf("  %-22s %14s %14s\n", "", "no-signal", "signal");
    line("sigma", report.no_signal.sigma, report.signal.sigma);
    line("equity value f", report.no_signal.valuation.f, report.signal.valuation.f);
    line("x1", report.no_signal.valuation.x1, report.signal.valuation.x1);
    line("vega", report.no_signal.valuation.vega, report.signal.valuation.vega);
    line("distance to default", report.no_signal.valuation.dd, report.signal.valuation.dd);
    line("reep", report.no_signal.reep.value, report.signal.reep.value);
    line("tail prob", report.tail.tail_prob_nosignal, report.tail.tail_prob_signal);
    line("VaR", report.tail.var_nosignal, report.tail.var_signal);
    std::printf("  bankruptcy flag: %s\n", report.tail.bankruptcy_flag ? "true" : "false");
    std::printf("  wall clock: %.3fs\n", report.wall_seconds);
}

int run_command(const CommonOptions& opts, const std::optional<capsig::SweepSpec>& sweep_override) {
    capsig::Scenario sc = load_with_overrides(opts);
    const std::filesystem::path out_dir = resolve_out_dir(opts, sc);

    std::optional<capsig::SweepSpec> sweep_spec = sweep_override;
    if (!sweep_spec && sc.sweep) sweep_spec = sc.sweep;

    const capsig::RunReport report = capsig::run_scenario(sc);
    std::optional<capsig::SweepResult> sweep;
    if (sweep_spec) {
        sweep = capsig::run_sweep(sc, sweep_spec->param, sweep_spec->values);
    }

    const auto files = capsig::emit_report(report, sweep ? &*sweep : nullptr, sc.outputs.format,
                                           out_dir);
    std::printf("scenario: %s (seed %llu)\n", opts.scenario_path.c_str(),
                static_cast<unsigned long long>(sc.grid.seed));
    print_summary(report);
    if (sweep) {
        std::printf("  sweep: %s over %zu values\n", sweep->param.c_str(), sweep->values.size());
    }
    if (!files.json.empty()) std::printf("wrote %s\n", files.json.string().c_str());
    if (!files.csv.empty()) std::printf("wrote %s\n", files.csv.string().c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Signal-embedded capital structure valuation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(capsig::kVersion));

    CommonOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario and emit reports");
    add_common(run_cmd, run_opts, true);

    CommonOptions validate_opts;
    auto* validate_cmd = app.add_subcommand("validate", "Validate a scenario and echo it");
    add_common(validate_cmd, validate_opts, false);

    CommonOptions sweep_opts;
    std::string sweep_param;
    std::vector<double> sweep_values;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    add_common(sweep_cmd, sweep_opts, true);
    sweep_cmd->add_option("--param", sweep_param, "Parameter to sweep")->required();
    sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")
        ->required()
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return run_command(run_opts, std::nullopt);
        }
        if (validate_cmd->parsed()) {
            const capsig::Scenario sc = load_with_overrides(validate_opts);
            std::cout << sc.to_toml();
            std::printf("# scenario OK\n");
            return kExitOk;
        }
        if (sweep_cmd->parsed()) {
            capsig::SweepSpec spec;
            spec.param = sweep_param;
            spec.values = sweep_values;
            return run_command(sweep_opts, spec);
        }
    } catch (const capsig::validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const capsig::io_error& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitRuntime;
}
