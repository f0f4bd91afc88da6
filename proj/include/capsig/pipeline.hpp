#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "capsig/benchmark.hpp"
#include "capsig/market.hpp"
#include "capsig/mechanism.hpp"
#include "capsig/merton.hpp"
#include "capsig/paths.hpp"
#include "capsig/reep.hpp"
#include "capsig/risk.hpp"
#include "capsig/scenario.hpp"

namespace capsig {

struct MechanismOutputs {
    double participation = 0.0;
    CareerComparison career;
    double ic_analytic = 0.0;
    McEstimate ic_mc;

    friend bool operator==(const MechanismOutputs&, const MechanismOutputs&) = default;
};

/// Everything the pipeline computes for one regime.
struct RegimeOutputs {
    double sigma = 0.0;  ///< volatility driving this regime's value paths
    double v = 0.0;      ///< firm value after uplift
    double d = 0.0;      ///< debt after uplift
    EquityValuation valuation;
    double h0 = 0.0;
    ReepEstimate reep;
    double call_value = 0.0;
    MechanismOutputs mechanism;

    friend bool operator==(const RegimeOutputs&, const RegimeOutputs&) = default;
};

struct RunReport {
    Scenario scenario;
    std::string measure = "physical";
    RegimeOutputs no_signal;
    RegimeOutputs signal;
    TailRiskReport tail;
    double wall_seconds = 0.0;  ///< CLI diagnostic; never serialized into report files
};

struct SweepResult {
    std::string param;
    std::vector<double> values;
    std::vector<RunReport> reports;
};

namespace pipeline_detail {

inline constexpr std::uint64_t kRiskTag = 0x7269736bULL;
inline constexpr std::uint64_t kReepTag = 0x72656570ULL;
inline constexpr std::uint64_t kMechTag = 0x6d656368ULL;

/// Mean first crossing of the simulated stock against the per-path
/// contractual boundary, snapped to the grid. The contractual boundary does
/// not depend on the labor beta, so matched-seed sweeps reuse one value.
inline HitResult aggregate_hitting_time(const PathSet& paths, const MarketParams& m,
                                        double beta_vw, const SimGrid& grid) {
    const auto& times = paths.times();
    const double eta = excess_return_eta(m, beta_vw);
    BoundaryCurve boundary;
    boundary.times = times;
    boundary.values.resize(times.size());
    boundary.kind = BoundaryKind::contractual;

    double sum_tau = 0.0;
    bool any_truncated = false;
    for (int p = 0; p < paths.n_paths(); ++p) {
        const auto index = paths.index(p);
        boundary.values[0] = m.s0;
        for (std::size_t k = 1; k < times.size(); ++k) {
            // observed benchmark along this index path
            boundary.values[k] =
                m.s0 * std::exp(beta_vw * std::log(index[k] / m.i0) + eta * times[k]);
        }
        const HitResult hit = first_hitting_time(paths.stock(p), boundary);
        sum_tau += hit.tau_h;
        any_truncated = any_truncated || hit.truncated;
    }
    const double mean_tau = sum_tau / paths.n_paths();
    const double dt = grid.dt();
    int idx = static_cast<int>(std::lround(mean_tau / dt));
    idx = std::clamp(idx, 1, grid.n_steps);
    return {times[static_cast<std::size_t>(idx)], any_truncated};
}

/// Exceedance curve p(t_k) for one regime on the deterministic
/// expected-index benchmark curves, plus pointwise standard errors
/// (zero in closed form).
struct PCurve {
    std::vector<double> p;
    std::vector<double> se;
};

inline PCurve exceedance_curve(const Scenario& sc, const SignalParams& regime_sig,
                               const std::vector<double>& times) {
    PCurve curve;
    curve.p.resize(times.size());
    const bool mc = sc.reep.mode == ReepConfig::Mode::mc;
    if (mc) curve.se.resize(times.size());
    const std::uint64_t eps_seed = derive_seed(sc.grid.seed, kReepTag);

    std::vector<double> samples;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double ratio = std::exp(sc.market.mu_i * times[k]);
        const double h_obs = observed_benchmark(sc.market, regime_sig.beta_vw, ratio, times[k]);
        const double h_true = true_benchmark(sc.market, regime_sig, ratio, times[k]);
        if (!mc) {
            curve.p[k] = exceedance_probability(h_true, h_obs, sc.reep.sigma_eps);
        } else {
            // Additive-noise draws; the noise stream depends only on
            // (seed, k), so regimes and sweep points stay matched.
            samples.resize(static_cast<std::size_t>(sc.grid.n_paths));
            StreamRng rng(eps_seed, k);
            for (auto& s : samples) s = h_true + sc.reep.sigma_eps * rng.normal();
            const ProbEstimate est = exceedance_probability(samples, h_obs);
            curve.p[k] = est.p;
            curve.se[k] = est.se;
        }
    }
    return curve;
}

/// Benchmark family H(t, theta) on the expected index curve, as a function
/// of the reported labor beta. Analytic theta-derivatives.
inline BenchmarkFamily pipeline_family(const Scenario& sc, double theta) {
    const MarketParams m = sc.market;
    const double beta_vw = sc.signal.beta_vw;
    const double loading = sc.signal.effective_loading();
    const double eta = excess_return_eta(m, beta_vw);
    auto level = [m, beta_vw, loading, eta](double t, double th) {
        const double log_ratio = m.mu_i * t;
        return m.s0 * std::exp((beta_vw + loading * th) * log_ratio + (eta + loading * th) * t);
    };
    BenchmarkFamily fam;
    fam.h = level;
    fam.h_theta = [level, loading, m](double t, double th) {
        return level(t, th) * loading * t * (1.0 + m.mu_i);
    };
    fam.h_theta_theta = [level, loading, m](double t, double th) {
        const double g = loading * t * (1.0 + m.mu_i);
        return level(t, th) * g * g;
    };
    fam.theta = theta;
    fam.sigma_eps = sc.mechanism.sigma_eps;
    return fam;
}

inline MechanismOutputs mechanism_outputs(const Scenario& sc, double v_regime, double d_regime,
                                          double theta) {
    MechanismOutputs out;
    out.participation = participation_payoff(sc.capital.alpha, v_regime, sc.capital.k);
    out.career = career_switch_comparison(sc.capital.alpha, v_regime, d_regime, sc.capital.k);
    const BenchmarkFamily fam = pipeline_family(sc, theta);
    out.ic_analytic = ic_inflation_analytic(fam, sc.tail.eval_time);
    out.ic_mc = ic_inflation_mc(fam, sc.tail.eval_time, sc.grid.n_paths,
                                derive_seed(sc.grid.seed, kMechTag));
    return out;
}

}  // namespace pipeline_detail

/// Run both regimes (signal and no-signal) of a scenario on matched seeds.
/// A zero signal makes the two regime sections identical bitwise.
[[nodiscard]] inline RunReport run_scenario(const Scenario& sc) {
    using namespace pipeline_detail;
    sc.validate();
    if (!(sc.capital.d > 0.0)) {
        throw validation_error("capital.d",
                               "must be > 0 for pipeline runs (module-level valuation alone "
                               "accepts d = 0)");
    }
    const auto t_start = std::chrono::steady_clock::now();

    RunReport report;
    report.scenario = sc;

    // Shared stock/index paths and the beta-independent crossing estimate.
    const PathSet paths = sc.antithetic ? antithetic_variant(sc.market, sc.grid)
                                        : simulate_correlated_gbm(sc.market, sc.grid);
    const HitResult hit =
        aggregate_hitting_time(paths, sc.market, sc.signal.beta_vw, sc.grid);
    const auto& times = paths.times();

    SignalParams sig_zero = sc.signal;
    sig_zero.beta_labor = 0.0;
    sig_zero.regime.reset();

    const double sigma_base = sc.market.sigma_s;
    const double sigma_theta =
        stock_volatility_with_signal(sigma_base, 0.0, sc.signal, sc.market.sigma_i);

    // Matched normal draws for the firm-value layer.
    const std::vector<double> z =
        normal_draws(derive_seed(sc.grid.seed, kRiskTag), static_cast<std::size_t>(sc.grid.n_paths));
    const double mu_v =
        (sc.risk.drift == RiskConfig::Drift::risk_neutral) ? sc.market.r : sc.market.mu_s;
    const double t_e = sc.tail.eval_time;
    const double sq_te = std::sqrt(t_e);

    auto build_regime = [&](const SignalParams& regime_sig, double sigma_regime, double v_regime,
                            double d_regime, const EquityValuation& valuation) {
        RegimeOutputs out;
        out.sigma = sigma_regime;
        out.v = v_regime;
        out.d = d_regime;
        out.valuation = valuation;

        const PCurve curve = exceedance_curve(sc, regime_sig, times);
        out.h0 = observed_benchmark(sc.market, regime_sig.beta_vw, 1.0, 0.0);
        out.reep = reep_value(sc.market.r, out.h0, times, curve.p, curve.se, hit.tau_h,
                              hit.truncated);
        out.call_value = decompose_call(out.h0, sc.market.s0, out.reep.value);

        out.mechanism =
            mechanism_outputs(sc, v_regime, d_regime, regime_sig.effective_beta_labor());
        return out;
    };

    report.no_signal = build_regime(sig_zero, sigma_base, sc.capital.v, sc.capital.d,
                                    equity_option_value(sc.capital, sc.market.r, sigma_base));
    report.signal = build_regime(
        sc.signal, sigma_theta, sc.capital.v * sc.v_uplift, sc.capital.d * sc.d_uplift,
        signal_equity_option(sc.capital, sc.market.r, sc.signal, sigma_base, sc.market.sigma_i,
                             sc.v_uplift, sc.d_uplift));

    // Tail layer: value paths per regime on the shared draws; x1 evaluated
    // at the reporting volatility (the no-signal sigma) in both regimes.
    auto regime_samples = [&](double sigma_regime, double v_regime, double d_regime) {
        RegimeSamples samples;
        std::vector<double> values(z.size());
        const double drift = (mu_v - 0.5 * sigma_regime * sigma_regime) * t_e;
        for (std::size_t j = 0; j < z.size(); ++j) {
            values[j] = v_regime * std::exp(drift + sigma_regime * sq_te * z[j]);
        }
        samples.x1 = x1_samples(values, d_regime, sc.market.r, sigma_base, t_e, sc.capital.tau);
        samples.losses.resize(values.size());
        for (std::size_t j = 0; j < values.size(); ++j) {
            samples.losses[j] = sc.capital.v - values[j];
        }
        return samples;
    };
    const RegimeSamples nosig_samples = regime_samples(sigma_base, sc.capital.v, sc.capital.d);
    const RegimeSamples sig_samples =
        regime_samples(sigma_theta, sc.capital.v * sc.v_uplift, sc.capital.d * sc.d_uplift);
    report.tail = bankruptcy_compare(sig_samples, nosig_samples, sc.tail);

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

/// Apply a sweep override to a scenario. Throws for unknown parameters.
inline void apply_param_override(Scenario& sc, const std::string& param, double value) {
    if (param == "beta_labor") {
        sc.signal.beta_labor = value;
    } else if (param == "b_labor") {
        sc.signal.b_labor = value;
    } else if (param == "kane_delta") {
        sc.signal.kane_delta = value;
    } else if (param == "beta_vw") {
        sc.signal.beta_vw = value;
    } else if (param == "sigma_s") {
        sc.market.sigma_s = value;
    } else if (param == "sigma_i") {
        sc.market.sigma_i = value;
    } else if (param == "rho") {
        sc.market.rho = value;
    } else if (param == "v_uplift") {
        sc.v_uplift = value;
    } else if (param == "d_uplift") {
        sc.d_uplift = value;
    } else if (param == "lambda") {
        sc.tail.lambda = value;
    } else if (param == "sigma_eps") {
        sc.reep.sigma_eps = value;
    } else {
        throw validation_error("sweep.param", "unknown parameter '" + param + "'");
    }
    sc.validate();
}

/// Run the pipeline across a parameter grid on matched seeds.
[[nodiscard]] inline SweepResult run_sweep(const Scenario& base, const std::string& param,
                                           const std::vector<double>& values) {
    if (values.empty()) throw validation_error("sweep.values", "must be non-empty");
    SweepResult result;
    result.param = param;
    result.values = values;
    result.reports.reserve(values.size());
    for (double v : values) {
        Scenario sc = base;
        sc.sweep.reset();
        apply_param_override(sc, param, v);
        result.reports.push_back(run_scenario(sc));
    }
    return result;
}

}  // namespace capsig
