#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "capsig/benchmark.hpp"
#include "capsig/errors.hpp"
#include "capsig/market.hpp"
#include "capsig/normal.hpp"
#include "capsig/rng.hpp"

namespace capsig {

/// Firm capital structure seen by the valuation and risk modules.
struct CapitalStructure {
    double v = 1.0;      ///< firm value (> 0)
    double d = 0.0;      ///< debt face value (>= 0)
    double alpha = 0.5;  ///< equity stake in (0,1)
    double k = 0.0;      ///< regulator's current compensation value (>= 0)
    double tau = 1.0;    ///< tenor T - t in years (> 0)

    void validate(const std::string& prefix = "capital") const {
        detail::require_finite(v, prefix + ".v");
        detail::require_finite(d, prefix + ".d");
        detail::require_finite(alpha, prefix + ".alpha");
        detail::require_finite(k, prefix + ".k");
        detail::require_finite(tau, prefix + ".tau");
        if (!(v > 0.0)) throw validation_error(prefix + ".v", "must be > 0");
        if (d < 0.0) throw validation_error(prefix + ".d", "must be >= 0");
        if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error(prefix + ".alpha", "must lie in (0,1)");
        if (k < 0.0) throw validation_error(prefix + ".k", "must be >= 0");
        if (!(tau > 0.0)) throw validation_error(prefix + ".tau", "must be > 0");
    }

    friend bool operator==(const CapitalStructure&, const CapitalStructure&) = default;
};

/// Equity-as-call valuation output. dd follows the -x1 sign convention, so
/// a larger x1 means a smaller distance to default.
struct EquityValuation {
    double f = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double vega = 0.0;
    double dd = 0.0;

    friend bool operator==(const EquityValuation&, const EquityValuation&) = default;
};

/// Option value of firm equity:
///   f = v*Phi(x1) - d*exp(-r*tau)*Phi(x2)
///   x1 = [ln(v/d) + (r + sigma^2/2) tau] / (sigma sqrt(tau)),  x2 = x1 - sigma sqrt(tau)
/// Degenerate inputs return analytic limits instead of erroring so scenario
/// sweeps never abort: d = 0 gives f = v with x1 = +inf; sigma = 0 gives the
/// deterministic payoff max(v - d e^{-r tau}, 0) with x1 = sign(v - d e^{-r tau}) * inf.
[[nodiscard]] inline EquityValuation equity_option_value(const CapitalStructure& cs, double r,
                                                         double sigma) {
    cs.validate();
    detail::require_finite(r, "r");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw validation_error("sigma", "must be finite and >= 0");
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const double disc = std::exp(-r * cs.tau);

    if (cs.d == 0.0) {
        return {cs.v, kInf, kInf, 0.0, -kInf};
    }
    if (sigma == 0.0) {
        const double fwd = cs.v - cs.d * disc;
        const double x1 = fwd > 0.0 ? kInf : (fwd < 0.0 ? -kInf : 0.0);
        return {std::max(fwd, 0.0), x1, x1, 0.0, -x1};
    }

    const double sqrt_tau = std::sqrt(cs.tau);
    const double x1 =
        (std::log(cs.v / cs.d) + (r + 0.5 * sigma * sigma) * cs.tau) / (sigma * sqrt_tau);
    const double x2 = x1 - sigma * sqrt_tau;
    const double f = cs.v * normal_cdf(x1) - cs.d * disc * normal_cdf(x2);
    const double vega = cs.v * normal_pdf(x1) * sqrt_tau;
    return {f, x1, x2, vega, -x1};
}

/// Vega = v * phi(x1) * sqrt(tau); zero in the degenerate branches.
[[nodiscard]] inline double vega(const CapitalStructure& cs, double r, double sigma) {
    return equity_option_value(cs, r, sigma).vega;
}

/// Valuation with the signal embedded: identical formulas evaluated at
/// sigma(theta) = sqrt(sigma_base^2 + (b'*beta)^2 sigma_i^2), firm value
/// v * v_uplift and debt d * d_uplift. Collapses bitwise to the no-signal
/// valuation when the signal term is zero and the uplifts are 1.
[[nodiscard]] inline EquityValuation signal_equity_option(const CapitalStructure& cs, double r,
                                                          const SignalParams& sig,
                                                          double sigma_base, double sigma_i,
                                                          double v_uplift,
                                                          double d_uplift = 1.0) {
    if (!(v_uplift >= 1.0) || !std::isfinite(v_uplift)) {
        throw validation_error("v_uplift", "must be finite and >= 1");
    }
    if (!(d_uplift > 0.0) || !std::isfinite(d_uplift)) {
        throw validation_error("d_uplift", "must be finite and > 0");
    }
    const double sigma_theta = stock_volatility_with_signal(sigma_base, 0.0, sig, sigma_i);
    CapitalStructure scaled = cs;
    scaled.v = cs.v * v_uplift;
    scaled.d = cs.d * d_uplift;
    return equity_option_value(scaled, r, sigma_theta);
}

/// Monte Carlo price estimate with its standard error.
struct McEstimate {
    double value = 0.0;
    double se = 0.0;
    bool low_path_warning = false;

    friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

/// Monte Carlo oracle for the equity value: discounted mean of
/// (V_T - D)^+ with V_T drawn from the exact risk-neutral GBM transition.
/// Kept deliberately independent of the closed form it cross-checks.
[[nodiscard]] inline McEstimate mc_equity_oracle(const CapitalStructure& cs, double r,
                                                 double sigma, const SimGrid& grid) {
    cs.validate();
    grid.validate();
    detail::require_finite(r, "r");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw validation_error("sigma", "must be finite and >= 0");
    }

    const double disc = std::exp(-r * cs.tau);
    const double drift = (r - 0.5 * sigma * sigma) * cs.tau;
    const double vol = sigma * std::sqrt(cs.tau);
    const std::vector<double> z = normal_draws(grid.seed, static_cast<std::size_t>(grid.n_paths));

    double mean = 0.0;
    double m2 = 0.0;
    for (int j = 0; j < grid.n_paths; ++j) {
        const double vt = cs.v * std::exp(drift + vol * z[j]);
        const double payoff = disc * std::max(vt - cs.d, 0.0);
        const double delta = payoff - mean;
        mean += delta / (j + 1);
        m2 += delta * (payoff - mean);
    }
    const double var = (grid.n_paths > 1) ? m2 / (grid.n_paths - 1) : 0.0;
    McEstimate est;
    est.value = mean;
    est.se = std::sqrt(var / grid.n_paths);
    est.low_path_warning = grid.n_paths < 100;
    return est;
}

}  // namespace capsig
