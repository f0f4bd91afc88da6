#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "capsig/benchmark.hpp"
#include "capsig/errors.hpp"
#include "capsig/market.hpp"
#include "capsig/merton.hpp"
#include "capsig/risk.hpp"
#include "capsig/toml_lite.hpp"

namespace capsig {

/// Exceedance-curve settings for the premium integral. sigma_eps is the
/// price-unit dispersion of the stock around the true benchmark, distinct
/// from the volatility-unit sigma_eps of the variance decomposition and
/// from the type-unit reporting noise under [mechanism].
struct ReepConfig {
    enum class Mode { closed_form, mc };
    Mode mode = Mode::closed_form;
    double sigma_eps = 5.0;

    friend bool operator==(const ReepConfig&, const ReepConfig&) = default;
};

/// Type-reporting noise scale for the incentive-compatibility expansion.
struct MechanismConfig {
    double sigma_eps = 0.01;

    friend bool operator==(const MechanismConfig&, const MechanismConfig&) = default;
};

/// Firm-value path drift for the tail-risk sampler.
struct RiskConfig {
    enum class Drift { risk_neutral, physical };
    Drift drift = Drift::risk_neutral;

    friend bool operator==(const RiskConfig&, const RiskConfig&) = default;
};

/// Optional parameter sweep embedded in a scenario.
struct SweepSpec {
    std::string param;
    std::vector<double> values;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct OutputConfig {
    std::string directory;       ///< empty = resolve via CAPSIG_OUT_DIR or cwd
    std::string format = "both"; ///< json | csv | both

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

/// Full run configuration. Every key has a documented default; dynamic
/// defaults (mu_i, beta_vw, eval_time, reep.sigma_eps) are resolved at load
/// time and echoed concretely.
struct Scenario {
    MarketParams market{.mu_s = 0.08, .sigma_s = 0.2, .mu_i = 0.08, .sigma_i = 0.15,
                        .rho = 0.3, .r = 0.05, .s0 = 100.0, .i0 = 1000.0};
    SignalParams signal{.beta_vw = 0.4, .beta_labor = 0.0, .b_labor = 0.5, .kane_delta = 0.0,
                        .regime = std::nullopt, .allow_negative_loading = false};
    CapitalStructure capital{.v = 100.0, .d = 80.0, .alpha = 0.1, .k = 5.0, .tau = 1.0};
    double v_uplift = 1.0;
    double d_uplift = 1.0;
    SimGrid grid{.t_max = 1.0, .n_steps = 252, .n_paths = 10000, .seed = 42};
    bool antithetic = false;
    TailConfig tail{.lambda = 1.0, .phi_frac = 0.5, .eval_time = 0.5, .confidence = 0.99};
    ReepConfig reep;
    MechanismConfig mechanism;
    RiskConfig risk;
    std::optional<SweepSpec> sweep;
    OutputConfig outputs;

    void validate() const {
        market.validate();
        signal.validate();
        capital.validate();
        grid.validate();
        tail.validate(grid.t_max);
        if (!(tail.eval_time < capital.tau)) {
            throw validation_error("tail.eval_time", "must precede capital.tau");
        }
        if (!(v_uplift >= 1.0) || !std::isfinite(v_uplift)) {
            throw validation_error("capital.v_uplift", "must be finite and >= 1");
        }
        if (!(d_uplift > 0.0) || !std::isfinite(d_uplift)) {
            throw validation_error("capital.d_uplift", "must be finite and > 0");
        }
        if (!(reep.sigma_eps >= 0.0) || !std::isfinite(reep.sigma_eps)) {
            throw validation_error("reep.sigma_eps", "must be finite and >= 0");
        }
        if (!(mechanism.sigma_eps >= 0.0) || !std::isfinite(mechanism.sigma_eps)) {
            throw validation_error("mechanism.sigma_eps", "must be finite and >= 0");
        }
        if (outputs.format != "json" && outputs.format != "csv" && outputs.format != "both") {
            throw validation_error("outputs.format", "must be one of json|csv|both");
        }
        if (sweep) {
            if (sweep->values.empty()) {
                throw validation_error("sweep.values", "must be non-empty when a sweep is present");
            }
            for (double v : sweep->values) detail::require_finite(v, "sweep.values");
            if (sweep->param.empty()) throw validation_error("sweep.param", "must name a parameter");
        }
    }

    [[nodiscard]] std::string to_toml() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct SectionReader {
    const toml_lite::Table* table;
    std::string section;
    std::set<std::string>* consumed;

    [[nodiscard]] const toml_lite::Value* find(const std::string& key) const {
        if (!table) return nullptr;
        const auto it = table->find(key);
        if (it == table->end()) return nullptr;
        consumed->insert(section + "." + key);
        return &it->second;
    }

    double number(const std::string& key, double fallback) const {
        const auto* v = find(key);
        if (!v) return fallback;
        if (v->kind != toml_lite::Value::Kind::number) {
            throw validation_error(section + "." + key, "expected a number");
        }
        return v->num;
    }

    int integer(const std::string& key, int fallback) const {
        const auto* v = find(key);
        if (!v) return fallback;
        if (v->kind != toml_lite::Value::Kind::number || !v->is_integer) {
            throw validation_error(section + "." + key, "expected an integer");
        }
        if (v->num < -2147483648.0 || v->num > 2147483647.0) {
            throw validation_error(section + "." + key, "integer out of range");
        }
        return static_cast<int>(v->num);
    }

    std::uint64_t uinteger(const std::string& key, std::uint64_t fallback) const {
        const auto* v = find(key);
        if (!v) return fallback;
        if (v->kind != toml_lite::Value::Kind::number || !v->is_integer || v->num < 0) {
            throw validation_error(section + "." + key, "expected a non-negative integer");
        }
        return v->uint_val;
    }

    bool boolean(const std::string& key, bool fallback) const {
        const auto* v = find(key);
        if (!v) return fallback;
        if (v->kind != toml_lite::Value::Kind::boolean) {
            throw validation_error(section + "." + key, "expected true or false");
        }
        return v->boolean;
    }

    std::string str(const std::string& key, const std::string& fallback) const {
        const auto* v = find(key);
        if (!v) return fallback;
        if (v->kind != toml_lite::Value::Kind::string) {
            throw validation_error(section + "." + key, "expected a quoted string");
        }
        return v->str;
    }

    std::vector<double> number_array(const std::string& key) const {
        const auto* v = find(key);
        if (!v) return {};
        if (v->kind != toml_lite::Value::Kind::number_array) {
            throw validation_error(section + "." + key, "expected an array of numbers");
        }
        return v->numbers;
    }

    [[nodiscard]] bool has(const std::string& key) const {
        return table && table->count(key) > 0;
    }
};

}  // namespace detail

/// Build a Scenario from parsed TOML, applying and resolving all defaults.
/// Unknown sections or keys are validation errors naming the offender.
[[nodiscard]] inline Scenario scenario_from_document(const toml_lite::Document& doc) {
    static const std::set<std::string> kSections = {"",         "market", "signal", "capital",
                                                    "grid",     "tail",   "reep",   "mechanism",
                                                    "risk",     "sweep",  "outputs"};
    for (const auto& [name, table] : doc) {
        if (!kSections.count(name)) {
            throw validation_error(name, "unknown section");
        }
        if (name.empty() && !table.empty()) {
            throw validation_error(table.begin()->first, "keys must live inside a section");
        }
    }

    std::set<std::string> consumed;
    auto section = [&](const char* name) {
        const auto it = doc.find(name);
        return detail::SectionReader{it == doc.end() ? nullptr : &it->second, name, &consumed};
    };

    Scenario sc;
    {
        const auto s = section("market");
        sc.market.mu_s = s.number("mu_s", sc.market.mu_s);
        sc.market.sigma_s = s.number("sigma_s", sc.market.sigma_s);
        // The index SDE gets its own drift; absent a value it mirrors the
        // stock drift.
        sc.market.mu_i = s.number("mu_i", sc.market.mu_s);
        sc.market.sigma_i = s.number("sigma_i", sc.market.sigma_i);
        sc.market.rho = s.number("rho", sc.market.rho);
        sc.market.r = s.number("r", sc.market.r);
        sc.market.s0 = s.number("s0", sc.market.s0);
        sc.market.i0 = s.number("i0", sc.market.i0);
    }
    {
        const auto s = section("signal");
        const double beta_vw_default =
            (sc.market.sigma_i > 0.0) ? sc.market.rho * sc.market.sigma_s / sc.market.sigma_i
                                      : 0.0;
        sc.signal.beta_vw = s.number("beta_vw", beta_vw_default);
        sc.signal.beta_labor = s.number("beta_labor", 0.0);
        sc.signal.b_labor = s.number("b_labor", 0.5);
        sc.signal.kane_delta = s.number("kane_delta", 0.0);
        sc.signal.allow_negative_loading = s.boolean("allow_negative_loading", false);
        const bool has_regime = s.has("regime_b0") || s.has("regime_b1") || s.has("regime_beta_star");
        if (has_regime) {
            BetaRegime regime;
            regime.b0 = s.number("regime_b0", 1.0);
            regime.b1 = s.number("regime_b1", 0.0);
            regime.beta_star = s.number("regime_beta_star", 0.0);
            sc.signal.regime = regime;
        }
    }
    {
        const auto s = section("capital");
        sc.capital.v = s.number("v", sc.capital.v);
        sc.capital.d = s.number("d", sc.capital.d);
        sc.capital.alpha = s.number("alpha", sc.capital.alpha);
        sc.capital.k = s.number("k", sc.capital.k);
        sc.capital.tau = s.number("tau", sc.capital.tau);
        sc.v_uplift = s.number("v_uplift", 1.0);
        sc.d_uplift = s.number("d_uplift", 1.0);
    }
    {
        const auto s = section("grid");
        sc.grid.t_max = s.number("t_max", sc.grid.t_max);
        sc.grid.n_steps = s.integer("n_steps", sc.grid.n_steps);
        sc.grid.n_paths = s.integer("n_paths", sc.grid.n_paths);
        sc.grid.seed = s.uinteger("seed", sc.grid.seed);
        sc.antithetic = s.boolean("antithetic", false);
    }
    {
        const auto s = section("tail");
        sc.tail.lambda = s.number("lambda", sc.tail.lambda);
        sc.tail.phi_frac = s.number("phi_frac", sc.tail.phi_frac);
        sc.tail.eval_time = s.number("eval_time", 0.5 * sc.grid.t_max);
        sc.tail.confidence = s.number("confidence", sc.tail.confidence);
    }
    {
        const auto s = section("reep");
        const std::string mode = s.str("mode", "closed_form");
        if (mode == "closed_form") {
            sc.reep.mode = ReepConfig::Mode::closed_form;
        } else if (mode == "mc") {
            sc.reep.mode = ReepConfig::Mode::mc;
        } else {
            throw validation_error("reep.mode", "must be closed_form or mc");
        }
        sc.reep.sigma_eps = s.number("sigma_eps", 0.05 * sc.market.s0);
    }
    {
        const auto s = section("mechanism");
        sc.mechanism.sigma_eps = s.number("sigma_eps", 0.01);
    }
    {
        const auto s = section("risk");
        const std::string drift = s.str("drift", "risk_neutral");
        if (drift == "risk_neutral") {
            sc.risk.drift = RiskConfig::Drift::risk_neutral;
        } else if (drift == "physical") {
            sc.risk.drift = RiskConfig::Drift::physical;
        } else {
            throw validation_error("risk.drift", "must be risk_neutral or physical");
        }
    }
    if (doc.count("sweep")) {
        const auto s = section("sweep");
        SweepSpec spec;
        spec.param = s.str("param", "");
        spec.values = s.number_array("values");
        sc.sweep = std::move(spec);
    }
    {
        const auto s = section("outputs");
        sc.outputs.directory = s.str("directory", "");
        sc.outputs.format = s.str("format", "both");
    }

    for (const auto& [name, table] : doc) {
        for (const auto& [key, value] : table) {
            const std::string qualified = name + "." + key;
            if (!consumed.count(qualified)) {
                throw validation_error(qualified, "unknown key");
            }
        }
    }

    sc.validate();
    return sc;
}

[[nodiscard]] inline Scenario load_scenario_string(const std::string& text,
                                                   const std::string& origin = "scenario") {
    return scenario_from_document(toml_lite::parse(text, origin));
}

[[nodiscard]] inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open scenario file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw io_error("failed reading scenario file: " + path.string());
    return load_scenario_string(buffer.str(), path.filename().string());
}

inline std::string Scenario::to_toml() const {
    using detail::fmt17;
    std::ostringstream out;
    out << "[market]\n";
    out << "mu_s = " << fmt17(market.mu_s) << "\n";
    out << "sigma_s = " << fmt17(market.sigma_s) << "\n";
    out << "mu_i = " << fmt17(market.mu_i) << "\n";
    out << "sigma_i = " << fmt17(market.sigma_i) << "\n";
    out << "rho = " << fmt17(market.rho) << "\n";
    out << "r = " << fmt17(market.r) << "\n";
    out << "s0 = " << fmt17(market.s0) << "\n";
    out << "i0 = " << fmt17(market.i0) << "\n";
    out << "\n[signal]\n";
    out << "beta_vw = " << fmt17(signal.beta_vw) << "\n";
    out << "beta_labor = " << fmt17(signal.beta_labor) << "\n";
    out << "b_labor = " << fmt17(signal.b_labor) << "\n";
    out << "kane_delta = " << fmt17(signal.kane_delta) << "\n";
    out << "allow_negative_loading = " << (signal.allow_negative_loading ? "true" : "false")
        << "\n";
    if (signal.regime) {
        out << "regime_b0 = " << fmt17(signal.regime->b0) << "\n";
        out << "regime_b1 = " << fmt17(signal.regime->b1) << "\n";
        out << "regime_beta_star = " << fmt17(signal.regime->beta_star) << "\n";
    }
    out << "\n[capital]\n";
    out << "v = " << fmt17(capital.v) << "\n";
    out << "d = " << fmt17(capital.d) << "\n";
    out << "alpha = " << fmt17(capital.alpha) << "\n";
    out << "k = " << fmt17(capital.k) << "\n";
    out << "tau = " << fmt17(capital.tau) << "\n";
    out << "v_uplift = " << fmt17(v_uplift) << "\n";
    out << "d_uplift = " << fmt17(d_uplift) << "\n";
    out << "\n[grid]\n";
    out << "t_max = " << fmt17(grid.t_max) << "\n";
    out << "n_steps = " << grid.n_steps << "\n";
    out << "n_paths = " << grid.n_paths << "\n";
    char seed_buf[32];
    std::snprintf(seed_buf, sizeof(seed_buf), "%" PRIu64, grid.seed);
    out << "seed = " << seed_buf << "\n";
    out << "antithetic = " << (antithetic ? "true" : "false") << "\n";
    out << "\n[tail]\n";
    out << "lambda = " << fmt17(tail.lambda) << "\n";
    out << "phi_frac = " << fmt17(tail.phi_frac) << "\n";
    out << "eval_time = " << fmt17(tail.eval_time) << "\n";
    out << "confidence = " << fmt17(tail.confidence) << "\n";
    out << "\n[reep]\n";
    out << "mode = \"" << (reep.mode == ReepConfig::Mode::closed_form ? "closed_form" : "mc")
        << "\"\n";
    out << "sigma_eps = " << fmt17(reep.sigma_eps) << "\n";
    out << "\n[mechanism]\n";
    out << "sigma_eps = " << fmt17(mechanism.sigma_eps) << "\n";
    out << "\n[risk]\n";
    out << "drift = \""
        << (risk.drift == RiskConfig::Drift::risk_neutral ? "risk_neutral" : "physical") << "\"\n";
    if (sweep) {
        out << "\n[sweep]\n";
        out << "param = \"" << sweep->param << "\"\n";
        out << "values = [";
        for (std::size_t i = 0; i < sweep->values.size(); ++i) {
            if (i) out << ", ";
            out << fmt17(sweep->values[i]);
        }
        out << "]\n";
    }
    out << "\n[outputs]\n";
    out << "directory = \"" << outputs.directory << "\"\n";
    out << "format = \"" << outputs.format << "\"\n";
    return out.str();
}

}  // namespace capsig
