#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "capsig/errors.hpp"
#include "capsig/market.hpp"

namespace capsig {

/// Conditional-beta typing: below/at the threshold the labor beta maps to
/// b0*beta, strictly above to (b0+b1)*beta. The boundary belongs to the
/// low type.
struct BetaRegime {
    double b0 = 0.0;
    double b1 = 0.0;
    double beta_star = 0.0;

    friend bool operator==(const BetaRegime&, const BetaRegime&) = default;
};

/// Human-capital signal parameters layered on top of the value-weighted
/// benchmark beta.
struct SignalParams {
    double beta_vw = 0.0;     ///< value-weighted beta against the peer index
    double beta_labor = 0.0;  ///< human-capital (labor) beta, >= 0
    double b_labor = 0.0;     ///< labor loading b'
    double kane_delta = 0.0;  ///< deferred-compensation penalty, >= 0
    std::optional<BetaRegime> regime;       ///< optional conditional-beta typing
    bool allow_negative_loading = false;    ///< permit b' - delta < 0 in sensitivity studies

    void validate(const std::string& prefix = "signal") const {
        detail::require_finite(beta_vw, prefix + ".beta_vw");
        detail::require_finite(beta_labor, prefix + ".beta_labor");
        detail::require_finite(b_labor, prefix + ".b_labor");
        detail::require_finite(kane_delta, prefix + ".kane_delta");
        if (beta_labor < 0.0) throw validation_error(prefix + ".beta_labor", "must be >= 0");
        if (kane_delta < 0.0) throw validation_error(prefix + ".kane_delta", "must be >= 0");
        if (regime) {
            detail::require_finite(regime->b0, prefix + ".regime_b0");
            detail::require_finite(regime->b1, prefix + ".regime_b1");
            detail::require_finite(regime->beta_star, prefix + ".regime_beta_star");
        }
    }

    /// Labor loading after the penalty. Clamped at zero unless the config
    /// explicitly allows a sign flip.
    [[nodiscard]] double effective_loading() const noexcept {
        const double loading = b_labor - kane_delta;
        return allow_negative_loading ? loading : std::max(loading, 0.0);
    }

    /// Labor beta after conditional-beta typing (identity when no regime
    /// is configured).
    [[nodiscard]] double effective_beta_labor() const noexcept {
        if (!regime) return beta_labor;
        const double loading = (beta_labor > regime->beta_star) ? (regime->b0 + regime->b1)
                                                                : regime->b0;
        return loading * beta_labor;
    }

    /// The product b' * beta_labor that enters every signal formula.
    [[nodiscard]] double signal_term() const noexcept {
        return effective_loading() * effective_beta_labor();
    }

    friend bool operator==(const SignalParams&, const SignalParams&) = default;
};

/// Benchmark levels and excess returns at one evaluation time.
struct BenchmarkPoint {
    double t = 0.0;
    double h_observed = 0.0;
    double h_true = 0.0;
    double eta = 0.0;
    double eta_hat = 0.0;

    friend bool operator==(const BenchmarkPoint&, const BenchmarkPoint&) = default;
};

/// Excess return eta = (r + rho*sigma_s*sigma_i/2) * (1 - beta_vw).
[[nodiscard]] inline double excess_return_eta(const MarketParams& m, double beta_vw) {
    m.validate();
    detail::require_finite(beta_vw, "beta_vw");
    return (m.r + 0.5 * m.rho * m.sigma_s * m.sigma_i) * (1.0 - beta_vw);
}

/// Contractual (firm-visible) benchmark
///   h = s0 * index_ratio^beta_vw * exp(eta*t),
/// evaluated in log space so large beta exponents cannot overflow.
[[nodiscard]] inline double observed_benchmark(const MarketParams& m, double beta_vw,
                                               double index_ratio, double t) {
    if (!(index_ratio > 0.0) || !std::isfinite(index_ratio)) {
        throw validation_error("index_ratio", "must be finite and > 0");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) throw validation_error("t", "must be finite and >= 0");
    const double eta = excess_return_eta(m, beta_vw);
    return m.s0 * std::exp(beta_vw * std::log(index_ratio) + eta * t);
}

/// Modified excess return eta_hat = eta + (b' - delta)*beta_labor.
[[nodiscard]] inline double modified_excess_return(double eta, const SignalParams& sig) {
    detail::require_finite(eta, "eta");
    sig.validate();
    return eta + sig.signal_term();
}

/// True (regulator-side) benchmark
///   h = s0 * index_ratio^beta_prime * exp(eta_hat*t),
/// with beta_prime = beta_vw + b'*beta_labor. Equals the contractual
/// benchmark exactly when beta_labor = 0.
[[nodiscard]] inline double true_benchmark(const MarketParams& m, const SignalParams& sig,
                                           double index_ratio, double t) {
    if (!(index_ratio > 0.0) || !std::isfinite(index_ratio)) {
        throw validation_error("index_ratio", "must be finite and > 0");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) throw validation_error("t", "must be finite and >= 0");
    sig.validate();
    const double eta = excess_return_eta(m, sig.beta_vw);
    const double eta_hat = eta + sig.signal_term();
    const double beta_prime = sig.beta_vw + sig.signal_term();
    return m.s0 * std::exp(beta_prime * std::log(index_ratio) + eta_hat * t);
}

/// Benchmark volatility under the signal:
///   sigma_h(theta) = sqrt(sigma_h^2 + (b'*beta)^2 sigma_i^2).
/// Returns sigma_h unchanged (bitwise) when the signal term vanishes, so a
/// fully penalized or zero signal collapses exactly to the no-signal value.
[[nodiscard]] inline double signal_volatility(double sigma_h, const SignalParams& sig,
                                              double sigma_i) {
    if (!(sigma_h >= 0.0) || !std::isfinite(sigma_h)) {
        throw validation_error("sigma_h", "must be finite and >= 0");
    }
    detail::require_finite(sigma_i, "sigma_i");
    const double term = sig.signal_term() * sigma_i;
    if (term == 0.0) return sigma_h;
    return std::sqrt(sigma_h * sigma_h + term * term);
}

/// Stock volatility under the signal:
///   sigma_s(theta) = sqrt(sigma_h^2 + (b'*beta)^2 sigma_i^2 + sigma_eps^2),
/// versus the no-signal sigma_s = sqrt(sigma_h^2 + sigma_eps^2).
[[nodiscard]] inline double stock_volatility_with_signal(double sigma_h, double sigma_eps,
                                                         const SignalParams& sig,
                                                         double sigma_i) {
    if (!(sigma_h >= 0.0) || !std::isfinite(sigma_h)) {
        throw validation_error("sigma_h", "must be finite and >= 0");
    }
    if (!(sigma_eps >= 0.0) || !std::isfinite(sigma_eps)) {
        throw validation_error("sigma_eps", "must be finite and >= 0");
    }
    const double base = std::sqrt(sigma_h * sigma_h + sigma_eps * sigma_eps);
    const double term = sig.signal_term() * sigma_i;
    if (term == 0.0) return base;
    return std::sqrt(base * base + term * term);
}

/// Effective labor beta under the conditional-beta regime. Errors when the
/// regime block is absent.
[[nodiscard]] inline double conditional_beta(const SignalParams& sig) {
    if (!sig.regime) {
        throw not_configured_error("conditional_beta: no conditional-beta regime configured");
    }
    return sig.effective_beta_labor();
}

/// Benchmark levels at (index_ratio, t) for both variants plus the excess
/// returns that generated them.
[[nodiscard]] inline BenchmarkPoint benchmark_point(const MarketParams& m, const SignalParams& sig,
                                                    double index_ratio, double t) {
    BenchmarkPoint pt;
    pt.t = t;
    pt.eta = excess_return_eta(m, sig.beta_vw);
    pt.eta_hat = modified_excess_return(pt.eta, sig);
    pt.h_observed = observed_benchmark(m, sig.beta_vw, index_ratio, t);
    pt.h_true = true_benchmark(m, sig, index_ratio, t);
    return pt;
}

}  // namespace capsig
