#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "capsig/pipeline.hpp"
#include "capsig/version.hpp"

namespace capsig {

using ordered_json = nlohmann::ordered_json;

namespace report_detail {

inline ordered_json scenario_json(const Scenario& sc) {
    ordered_json j;
    j["market"] = {{"mu_s", sc.market.mu_s},   {"sigma_s", sc.market.sigma_s},
                   {"mu_i", sc.market.mu_i},   {"sigma_i", sc.market.sigma_i},
                   {"rho", sc.market.rho},     {"r", sc.market.r},
                   {"s0", sc.market.s0},       {"i0", sc.market.i0}};
    ordered_json signal = {{"beta_vw", sc.signal.beta_vw},
                           {"beta_labor", sc.signal.beta_labor},
                           {"b_labor", sc.signal.b_labor},
                           {"kane_delta", sc.signal.kane_delta},
                           {"allow_negative_loading", sc.signal.allow_negative_loading}};
    if (sc.signal.regime) {
        signal["regime_b0"] = sc.signal.regime->b0;
        signal["regime_b1"] = sc.signal.regime->b1;
        signal["regime_beta_star"] = sc.signal.regime->beta_star;
    }
    j["signal"] = std::move(signal);
    j["capital"] = {{"v", sc.capital.v},       {"d", sc.capital.d}, {"alpha", sc.capital.alpha},
                    {"k", sc.capital.k},       {"tau", sc.capital.tau},
                    {"v_uplift", sc.v_uplift}, {"d_uplift", sc.d_uplift}};
    j["grid"] = {{"t_max", sc.grid.t_max},
                 {"n_steps", sc.grid.n_steps},
                 {"n_paths", sc.grid.n_paths},
                 {"seed", sc.grid.seed},
                 {"antithetic", sc.antithetic}};
    j["tail"] = {{"lambda", sc.tail.lambda},
                 {"phi_frac", sc.tail.phi_frac},
                 {"eval_time", sc.tail.eval_time},
                 {"confidence", sc.tail.confidence}};
    j["reep"] = {{"mode", sc.reep.mode == ReepConfig::Mode::closed_form ? "closed_form" : "mc"},
                 {"sigma_eps", sc.reep.sigma_eps}};
    j["mechanism"] = {{"sigma_eps", sc.mechanism.sigma_eps}};
    j["risk"] = {{"drift", sc.risk.drift == RiskConfig::Drift::risk_neutral ? "risk_neutral"
                                                                            : "physical"}};
    if (sc.sweep) {
        j["sweep"] = {{"param", sc.sweep->param}, {"values", sc.sweep->values}};
    }
    j["outputs"] = {{"directory", sc.outputs.directory}, {"format", sc.outputs.format}};
    return j;
}

inline ordered_json regime_json(const RegimeOutputs& out) {
    ordered_json j;
    j["sigma"] = out.sigma;
    j["v"] = out.v;
    j["d"] = out.d;
    j["valuation"] = {{"f", out.valuation.f},
                      {"x1", out.valuation.x1},
                      {"x2", out.valuation.x2},
                      {"vega", out.valuation.vega},
                      {"dd", out.valuation.dd}};
    j["reep"] = {{"value", out.reep.value},   {"stderr", out.reep.se},
                 {"tau_h", out.reep.tau_h},   {"truncated", out.reep.truncated},
                 {"h0", out.h0},              {"call_value", out.call_value}};
    j["mechanism"] = {{"participation_payoff", out.mechanism.participation},
                      {"perceived", out.mechanism.career.perceived},
                      {"actual", out.mechanism.career.actual},
                      {"career_regime", out.mechanism.career.regime_label()},
                      {"inclined_to_switch", out.mechanism.career.inclined_to_switch()},
                      {"ic_analytic", out.mechanism.ic_analytic},
                      {"ic_mc", out.mechanism.ic_mc.value},
                      {"ic_mc_stderr", out.mechanism.ic_mc.se}};
    return j;
}

inline ordered_json tail_json(const TailRiskReport& t) {
    return {{"var_x1_nosignal", t.var_x1_nosignal},
            {"var_x1_signal", t.var_x1_signal},
            {"tail_prob_nosignal", t.tail_prob_nosignal},
            {"tail_prob_signal", t.tail_prob_signal},
            {"chebyshev_bound_nosignal", t.chebyshev_bound_nosignal},
            {"var_nosignal", t.var_nosignal},
            {"var_signal", t.var_signal},
            {"bankruptcy_flag", t.bankruptcy_flag}};
}

}  // namespace report_detail

/// Flat summary row shared by the CSV table and the JSON "summary"/"sweep"
/// sections. Insertion order fixes the CSV column order.
[[nodiscard]] inline std::vector<std::pair<std::string, ordered_json>> flat_summary(
    const RunReport& report) {
    std::vector<std::pair<std::string, ordered_json>> row;
    auto add = [&row](const std::string& name, ordered_json value) {
        row.emplace_back(name, std::move(value));
    };
    auto add_regime = [&](const std::string& prefix, const RegimeOutputs& out) {
        add(prefix + "_sigma", out.sigma);
        add(prefix + "_f", out.valuation.f);
        add(prefix + "_x1", out.valuation.x1);
        add(prefix + "_x2", out.valuation.x2);
        add(prefix + "_vega", out.valuation.vega);
        add(prefix + "_dd", out.valuation.dd);
        add(prefix + "_reep", out.reep.value);
        add(prefix + "_reep_stderr", out.reep.se);
        add(prefix + "_tau_h", out.reep.tau_h);
        add(prefix + "_truncated", out.reep.truncated);
        add(prefix + "_call_value", out.call_value);
        add(prefix + "_participation", out.mechanism.participation);
        add(prefix + "_perceived", out.mechanism.career.perceived);
        add(prefix + "_actual", out.mechanism.career.actual);
        add(prefix + "_career_regime", out.mechanism.career.regime_label());
        add(prefix + "_ic_analytic", out.mechanism.ic_analytic);
        add(prefix + "_ic_mc", out.mechanism.ic_mc.value);
        add(prefix + "_ic_mc_stderr", out.mechanism.ic_mc.se);
    };
    add_regime("nosignal", report.no_signal);
    add_regime("signal", report.signal);
    add("var_x1_nosignal", report.tail.var_x1_nosignal);
    add("var_x1_signal", report.tail.var_x1_signal);
    add("tail_prob_nosignal", report.tail.tail_prob_nosignal);
    add("tail_prob_signal", report.tail.tail_prob_signal);
    add("chebyshev_bound_nosignal", report.tail.chebyshev_bound_nosignal);
    add("var_nosignal", report.tail.var_nosignal);
    add("var_signal", report.tail.var_signal);
    add("bankruptcy_flag", report.tail.bankruptcy_flag);
    return row;
}

/// Full JSON report. Wall-clock time is deliberately absent so reports are
/// byte-identical for a fixed (scenario, seed).
[[nodiscard]] inline ordered_json report_to_json(const RunReport& report,
                                                 const SweepResult* sweep = nullptr) {
    using namespace report_detail;
    ordered_json j;
    j["meta"] = {{"toolkit", kToolkitName},
                 {"version", kVersion},
                 {"seed", report.scenario.grid.seed},
                 {"measure", report.measure}};
    j["scenario"] = scenario_json(report.scenario);
    j["no_signal"] = regime_json(report.no_signal);
    j["signal"] = regime_json(report.signal);
    j["tail_risk"] = tail_json(report.tail);
    ordered_json summary;
    for (const auto& [name, value] : flat_summary(report)) summary[name] = value;
    j["summary"] = std::move(summary);
    if (sweep) {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < sweep->reports.size(); ++i) {
            ordered_json row;
            row["sweep_param"] = sweep->param;
            row["sweep_value"] = sweep->values[i];
            for (const auto& [name, value] : flat_summary(sweep->reports[i])) row[name] = value;
            rows.push_back(std::move(row));
        }
        j["sweep"] = {{"param", sweep->param}, {"values", sweep->values}, {"rows", std::move(rows)}};
    }
    return j;
}

[[nodiscard]] inline std::string report_json_text(const RunReport& report,
                                                  const SweepResult* sweep = nullptr) {
    return report_to_json(report, sweep).dump(2) + "\n";
}

namespace report_detail {

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted += "\"";
    return quoted;
}

inline std::string csv_cell(const ordered_json& value) {
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    if (value.is_string()) return csv_quote(value.get<std::string>());
    if (value.is_number_float()) return detail::fmt17(value.get<double>());
    return value.dump();
}

}  // namespace report_detail

/// Flat CSV table: one row per sweep value, or a single base row when no
/// sweep is present. Header row first, RFC-style quoting.
[[nodiscard]] inline std::string tables_csv_text(const RunReport& base,
                                                 const SweepResult* sweep = nullptr) {
    using namespace report_detail;
    std::string out;
    const auto base_row = flat_summary(base);
    out += "sweep_param,sweep_value";
    for (const auto& [name, value] : base_row) {
        out += ",";
        out += csv_quote(name);
    }
    out += "\n";

    auto emit_row = [&out](const std::string& param, const std::string& value,
                           const std::vector<std::pair<std::string, ordered_json>>& row) {
        out += csv_quote(param);
        out += ",";
        out += value;
        for (const auto& [name, cell] : row) {
            out += ",";
            out += csv_cell(cell);
        }
        out += "\n";
    };

    if (!sweep) {
        emit_row("", "", base_row);
    } else {
        for (std::size_t i = 0; i < sweep->reports.size(); ++i) {
            emit_row(sweep->param, detail::fmt17(sweep->values[i]),
                     flat_summary(sweep->reports[i]));
        }
    }
    return out;
}

struct EmittedFiles {
    std::filesystem::path json;
    std::filesystem::path csv;
};

/// Write report files into out_dir. format selects json, csv or both.
inline EmittedFiles emit_report(const RunReport& report, const SweepResult* sweep,
                                const std::string& format, const std::filesystem::path& out_dir) {
    if (format != "json" && format != "csv" && format != "both") {
        throw validation_error("outputs.format", "must be one of json|csv|both");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create output directory: " + out_dir.string());

    EmittedFiles files;
    auto write_file = [&](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw io_error("cannot open for writing: " + path.string());
        out << text;
        if (!out) throw io_error("failed writing: " + path.string());
    };
    if (format != "csv") {
        files.json = out_dir / "report.json";
        write_file(files.json, report_json_text(report, sweep));
    }
    if (format != "json") {
        files.csv = out_dir / "tables.csv";
        write_file(files.csv, tables_csv_text(report, sweep));
    }
    return files;
}

}  // namespace capsig
