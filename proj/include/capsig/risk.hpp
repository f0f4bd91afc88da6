#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "capsig/errors.hpp"
#include "capsig/market.hpp"
#include "capsig/reep.hpp"

namespace capsig {

/// Tail-risk thresholds and the VaR confidence level.
struct TailConfig {
    double lambda = 1.0;      ///< deviation threshold (> 0)
    double phi_frac = 0.5;    ///< lower-tail share of the two-sided bound, in (0,1]
    double eval_time = 0.5;   ///< intermediate sampling date t_e, in (0, t_max)
    double confidence = 0.99; ///< VaR confidence, in (0,1)

    void validate(double t_max, const std::string& prefix = "tail") const {
        detail::require_finite(lambda, prefix + ".lambda");
        detail::require_finite(phi_frac, prefix + ".phi_frac");
        detail::require_finite(eval_time, prefix + ".eval_time");
        detail::require_finite(confidence, prefix + ".confidence");
        if (!(lambda > 0.0)) throw validation_error(prefix + ".lambda", "must be > 0");
        if (!(phi_frac > 0.0 && phi_frac <= 1.0)) {
            throw validation_error(prefix + ".phi_frac", "must lie in (0,1]");
        }
        if (!(eval_time > 0.0 && eval_time < t_max)) {
            throw validation_error(prefix + ".eval_time", "must lie in (0, t_max)");
        }
        if (!(confidence > 0.0 && confidence < 1.0)) {
            throw validation_error(prefix + ".confidence", "must lie in (0,1)");
        }
    }

    friend bool operator==(const TailConfig&, const TailConfig&) = default;
};

/// Signal vs no-signal tail comparison.
struct TailRiskReport {
    double var_x1_signal = 0.0;
    double var_x1_nosignal = 0.0;
    double tail_prob_signal = 0.0;
    double tail_prob_nosignal = 0.0;
    double chebyshev_bound_nosignal = 0.0;
    double var_signal = 0.0;
    double var_nosignal = 0.0;
    bool bankruptcy_flag = false;

    friend bool operator==(const TailRiskReport&, const TailRiskReport&) = default;
};

/// Unbiased sample variance (zero for fewer than two samples).
[[nodiscard]] inline double sample_variance(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    return ss / static_cast<double>(n - 1);
}

/// Per-path x1 from firm values observed at the evaluation date, over the
/// remaining tenor maturity - eval_time. `sigma` is the volatility used in
/// the x1 formula (the reported/assumed one); the dispersion of the values
/// themselves carries whatever volatility actually generated them.
[[nodiscard]] inline std::vector<double> x1_samples(std::span<const double> values_at_eval,
                                                    double d, double r, double sigma,
                                                    double eval_time, double maturity) {
    if (values_at_eval.empty()) throw validation_error("values_at_eval", "must be non-empty");
    if (!(d > 0.0) || !std::isfinite(d)) throw validation_error("d", "must be finite and > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw validation_error("sigma", "must be finite and > 0");
    }
    detail::require_finite(r, "r");
    if (!(eval_time < maturity)) {
        throw validation_error("eval_time", "must precede the maturity");
    }
    const double tau = maturity - eval_time;
    const double denom = sigma * std::sqrt(tau);
    const double shift = (r + 0.5 * sigma * sigma) * tau;
    std::vector<double> out(values_at_eval.size());
    for (std::size_t j = 0; j < values_at_eval.size(); ++j) {
        if (!(values_at_eval[j] > 0.0)) {
            throw numeric_error("x1_samples: non-positive firm value, impossible under GBM");
        }
        out[j] = (std::log(values_at_eval[j] / d) + shift) / denom;
    }
    return out;
}

/// Lower-tail frequency Pr{x1 < -lambda} with binomial standard error.
[[nodiscard]] inline ProbEstimate tail_probability(std::span<const double> samples,
                                                   double lambda) {
    if (samples.empty()) throw validation_error("samples", "must be non-empty");
    detail::require_finite(lambda, "lambda");
    std::size_t count = 0;
    for (double s : samples) {
        if (s < -lambda) ++count;
    }
    const double n = static_cast<double>(samples.size());
    const double p = static_cast<double>(count) / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

/// Chebyshev-type tail bound phi_frac * variance / lambda^2, clamped to [0,1].
[[nodiscard]] inline double chebyshev_bound(double variance, double lambda, double phi_frac) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw validation_error("lambda", "must be finite and > 0");
    }
    if (!(variance >= 0.0) || !std::isfinite(variance)) {
        throw validation_error("variance", "must be finite and >= 0");
    }
    detail::require_finite(phi_frac, "phi_frac");
    return std::clamp(phi_frac * variance / (lambda * lambda), 0.0, 1.0);
}

/// Empirical loss quantile with linear interpolation between order
/// statistics: for sorted losses x and h = (n-1)*confidence,
/// VaR = x[floor(h)] + frac(h) * (x[floor(h)+1] - x[floor(h)]).
[[nodiscard]] inline double var_estimate(std::span<const double> losses, double confidence) {
    if (losses.empty()) throw validation_error("losses", "must be non-empty");
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw validation_error("confidence", "must lie in (0,1)");
    }
    std::vector<double> sorted(losses.begin(), losses.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1.0) * confidence;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// Per-regime inputs for the tail comparison, sampled on matched seeds.
struct RegimeSamples {
    std::vector<double> x1;
    std::vector<double> losses;
};

/// Tail comparison across regimes: lower-tail frequencies of the event
/// {x1 < -lambda} (the pre-limit bankruptcy event), the no-signal
/// Chebyshev threshold, and the VaR of each loss sample. The bankruptcy
/// flag is raised when the signal-regime tail frequency exceeds the
/// no-signal threshold phi_frac * Var(x1)/lambda^2.
[[nodiscard]] inline TailRiskReport bankruptcy_compare(const RegimeSamples& signal,
                                                       const RegimeSamples& no_signal,
                                                       const TailConfig& cfg) {
    if (signal.x1.size() != no_signal.x1.size() ||
        signal.losses.size() != no_signal.losses.size()) {
        throw validation_error("regimes", "signal/no-signal sample grids do not match");
    }
    TailRiskReport report;
    report.var_x1_signal = sample_variance(signal.x1);
    report.var_x1_nosignal = sample_variance(no_signal.x1);
    report.tail_prob_signal = tail_probability(signal.x1, cfg.lambda).p;
    report.tail_prob_nosignal = tail_probability(no_signal.x1, cfg.lambda).p;
    report.chebyshev_bound_nosignal =
        chebyshev_bound(report.var_x1_nosignal, cfg.lambda, cfg.phi_frac);
    report.var_signal = var_estimate(signal.losses, cfg.confidence);
    report.var_nosignal = var_estimate(no_signal.losses, cfg.confidence);
    report.bankruptcy_flag = report.tail_prob_signal > report.chebyshev_bound_nosignal;
    return report;
}

}  // namespace capsig
