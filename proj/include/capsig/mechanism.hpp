#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "capsig/errors.hpp"
#include "capsig/merton.hpp"
#include "capsig/rng.hpp"

namespace capsig {

/// A benchmark family H(t, theta) with optional analytic theta-derivatives.
/// When the derivative evaluators are absent, 5-point central differences
/// with step 1e-4 * max(1, |theta|) are used.
struct BenchmarkFamily {
    std::function<double(double t, double theta)> h;
    std::function<double(double t, double theta)> h_theta;        // optional
    std::function<double(double t, double theta)> h_theta_theta;  // optional
    double theta = 0.0;
    double sigma_eps = 0.0;

    [[nodiscard]] double fd_step() const noexcept { return 1e-4 * std::max(1.0, std::abs(theta)); }

    [[nodiscard]] double d1(double t) const {
        if (h_theta) return h_theta(t, theta);
        const double s = fd_step();
        return (-h(t, theta + 2 * s) + 8.0 * h(t, theta + s) - 8.0 * h(t, theta - s) +
                h(t, theta - 2 * s)) /
               (12.0 * s);
    }

    [[nodiscard]] double d2(double t) const {
        if (h_theta_theta) return h_theta_theta(t, theta);
        const double s = fd_step();
        return (-h(t, theta + 2 * s) + 16.0 * h(t, theta + s) - 30.0 * h(t, theta) +
                16.0 * h(t, theta - s) - h(t, theta - 2 * s)) /
               (12.0 * s * s);
    }
};

/// Regulator's participation payoff (alpha*v - k)^+.
[[nodiscard]] inline double participation_payoff(double alpha, double v, double k) {
    detail::require_finite(v, "v");
    detail::require_finite(k, "k");
    if (!(alpha > 0.0 && alpha < 1.0) || !std::isfinite(alpha)) {
        throw validation_error("alpha", "must lie in (0,1)");
    }
    return std::max(alpha * v - k, 0.0);
}

/// Career-switch comparison of the perceived payoff (alpha*v - k)^+ against
/// the actual equity payoff (alpha*v - alpha*d)^+.
struct CareerComparison {
    double perceived = 0.0;
    double actual = 0.0;
    enum class Regime { overvalues, indifferent, undervalues } regime = Regime::indifferent;

    [[nodiscard]] const char* regime_label() const noexcept {
        switch (regime) {
            case Regime::overvalues: return "overvalues";
            case Regime::undervalues: return "undervalues";
            default: return "indifferent";
        }
    }
    /// K below the pseudo-strike alpha*D means the regulator's valuation of
    /// the switch exceeds the equity payoff.
    [[nodiscard]] bool inclined_to_switch() const noexcept {
        return regime == Regime::overvalues;
    }

    friend bool operator==(const CareerComparison&, const CareerComparison&) = default;
};

[[nodiscard]] inline CareerComparison career_switch_comparison(double alpha, double v, double d,
                                                               double k) {
    detail::require_finite(d, "d");
    CareerComparison cmp;
    cmp.perceived = participation_payoff(alpha, v, k);
    cmp.actual = std::max(alpha * v - alpha * d, 0.0);
    const double strike = alpha * d;
    cmp.regime = (k < strike)   ? CareerComparison::Regime::overvalues
                 : (k > strike) ? CareerComparison::Regime::undervalues
                                : CareerComparison::Regime::indifferent;
    return cmp;
}

/// Second-order benchmark inflation from misreporting the type:
///   (H_tt/2 - H_t * t + H * t^2 / 2) * sigma_eps^2 * exp(-theta*t),
/// the expansion of E[H(t, theta+eps) e^{-(theta+eps)t}] - H(t,theta) e^{-theta t}.
[[nodiscard]] inline double ic_inflation_analytic(const BenchmarkFamily& fam, double t) {
    detail::require_finite(t, "t");
    const double h = fam.h(t, fam.theta);
    const double d1 = fam.d1(t);
    const double d2 = fam.d2(t);
    if (!std::isfinite(h) || !std::isfinite(d1) || !std::isfinite(d2)) {
        throw numeric_error("ic_inflation_analytic: non-finite benchmark derivative");
    }
    const double bracket = 0.5 * d2 - d1 * t + 0.5 * h * t * t;
    return bracket * fam.sigma_eps * fam.sigma_eps * std::exp(-fam.theta * t);
}

/// Monte Carlo estimate of E[H(t, theta_hat) e^{-theta_hat t}] - H(t,theta) e^{-theta t}
/// with theta_hat = theta + eps, eps ~ N(0, sigma_eps^2).
[[nodiscard]] inline McEstimate ic_inflation_mc(const BenchmarkFamily& fam, double t, int n_draws,
                                                std::uint64_t seed) {
    detail::require_finite(t, "t");
    if (n_draws < 1) throw validation_error("n_draws", "must be >= 1");
    const double base = fam.h(t, fam.theta) * std::exp(-fam.theta * t);
    const std::vector<double> z = normal_draws(seed, static_cast<std::size_t>(n_draws));

    double mean = 0.0;
    double m2 = 0.0;
    for (int j = 0; j < n_draws; ++j) {
        const double theta_hat = fam.theta + fam.sigma_eps * z[j];
        const double sample = fam.h(t, theta_hat) * std::exp(-theta_hat * t) - base;
        const double delta = sample - mean;
        mean += delta / (j + 1);
        m2 += delta * (sample - mean);
    }
    McEstimate est;
    est.value = mean;
    est.se = (n_draws > 1) ? std::sqrt(m2 / (n_draws - 1) / n_draws) : 0.0;
    est.low_path_warning = n_draws < 100;
    return est;
}

}  // namespace capsig
