#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "capsig/errors.hpp"
#include "capsig/market.hpp"
#include "capsig/normal.hpp"

namespace capsig {

/// Which benchmark a boundary curve represents.
enum class BoundaryKind { contractual, true_signal };

/// Benchmark level per grid time, used as the exercise boundary.
struct BoundaryCurve {
    std::vector<double> times;
    std::vector<double> values;
    BoundaryKind kind = BoundaryKind::contractual;

    void validate() const {
        if (times.size() != values.size() || times.size() < 2) {
            throw validation_error("boundary", "times/values must share a grid of >= 2 points");
        }
        for (double v : values) {
            if (!(v > 0.0)) throw validation_error("boundary.values", "must be > 0");
        }
    }

    friend bool operator==(const BoundaryCurve&, const BoundaryCurve&) = default;
};

/// First-crossing result at grid resolution.
struct HitResult {
    double tau_h = 0.0;
    bool truncated = false;

    friend bool operator==(const HitResult&, const HitResult&) = default;
};

/// First grid time t > 0 at which the path touches the boundary or the gap
/// changes sign relative to its sign at the first step. The start point is
/// excluded because the contractual benchmark pins H(0) = S(0); no crossing
/// reports tau_h = t_max with the truncated flag set. Crossing detection is
/// at grid resolution (no bridge correction); the bias shrinks with dt and
/// is bounded empirically by grid-halving in the tests.
[[nodiscard]] inline HitResult first_hitting_time(std::span<const double> path,
                                                  const BoundaryCurve& boundary) {
    boundary.validate();
    if (path.size() != boundary.times.size()) {
        throw validation_error("path", "path and boundary grids do not match");
    }
    const std::size_t n = path.size();
    const double d1 = path[1] - boundary.values[1];
    if (d1 == 0.0) return {boundary.times[1], false};
    const bool above = d1 > 0.0;
    for (std::size_t k = 2; k < n; ++k) {
        const double dk = path[k] - boundary.values[k];
        if (dk == 0.0 || (dk > 0.0) != above) return {boundary.times[k], false};
    }
    return {boundary.times[n - 1], true};
}

/// Probability estimate with standard error (zero for closed forms).
struct ProbEstimate {
    double p = 0.0;
    double se = 0.0;

    friend bool operator==(const ProbEstimate&, const ProbEstimate&) = default;
};

/// Monte Carlo exceedance probability at one grid time: the fraction of
/// sampled values strictly above the boundary level, with binomial SE.
[[nodiscard]] inline ProbEstimate exceedance_probability(std::span<const double> values_at_t,
                                                         double boundary_at_t) {
    if (values_at_t.empty()) throw validation_error("values_at_t", "must be non-empty");
    detail::require_finite(boundary_at_t, "boundary_at_t");
    std::size_t count = 0;
    for (double v : values_at_t) {
        if (v > boundary_at_t) ++count;
    }
    const double n = static_cast<double>(values_at_t.size());
    const double p = static_cast<double>(count) / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

/// Closed-form exceedance under the additive Gaussian-noise model
/// S(t) = h_true(t) + eps:  p = Phi((h_true - h_observed)/sigma_eps).
/// With sigma_eps = 0 the value degenerates to an indicator, with the tie
/// h_true = h_observed resolved to 1/2 by symmetry.
[[nodiscard]] inline double exceedance_probability(double h_true_t, double h_observed_t,
                                                   double sigma_eps) {
    detail::require_finite(h_true_t, "h_true_t");
    detail::require_finite(h_observed_t, "h_observed_t");
    if (!(sigma_eps >= 0.0) || !std::isfinite(sigma_eps)) {
        throw validation_error("sigma_eps", "must be finite and >= 0");
    }
    const double gap = h_true_t - h_observed_t;
    if (sigma_eps == 0.0) return gap > 0.0 ? 1.0 : (gap < 0.0 ? 0.0 : 0.5);
    return normal_cdf(gap / sigma_eps);
}

/// Early exercise premium estimate.
struct ReepEstimate {
    double value = 0.0;
    double se = 0.0;
    double tau_h = 0.0;
    bool truncated = false;

    friend bool operator==(const ReepEstimate&, const ReepEstimate&) = default;
};

/// Early exercise premium
///   r * h0 * integral_0^tau_h exp(-r u) p(u) du
/// by the trapezoidal rule on the grid. tau_h must coincide with a grid
/// point. The SE propagates pointwise p standard errors through the
/// quadrature weights, treating them as independent across grid times.
[[nodiscard]] inline ReepEstimate reep_value(double r, double h0, std::span<const double> times,
                                             std::span<const double> p,
                                             std::span<const double> p_se, double tau_h,
                                             bool truncated = false) {
    detail::require_finite(r, "r");
    detail::require_finite(h0, "h0");
    if (times.size() != p.size() || times.size() < 2) {
        throw validation_error("p_curve", "times/p must share a grid of >= 2 points");
    }
    if (!p_se.empty() && p_se.size() != p.size()) {
        throw validation_error("p_se", "must be empty or match the p grid");
    }

    const double span = times.back() - times.front();
    const double tol = 1e-9 * std::max(1.0, span);
    std::size_t last = times.size();
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (std::abs(times[k] - tau_h) <= tol) {
            last = k;
            break;
        }
    }
    if (last == times.size() || last == 0) {
        throw validation_error("tau_h", "must coincide with a grid point after the start");
    }

    double integral = 0.0;
    double prev_f = std::exp(-r * times[0]) * p[0];
    double var = 0.0;
    auto weight = [&](std::size_t k) {
        const double left = (k == 0) ? times[0] : times[k - 1];
        const double right = (k == last) ? times[last] : times[k + 1];
        return 0.5 * (right - left);
    };
    for (std::size_t k = 1; k <= last; ++k) {
        const double f = std::exp(-r * times[k]) * p[k];
        integral += 0.5 * (prev_f + f) * (times[k] - times[k - 1]);
        prev_f = f;
    }
    if (!p_se.empty()) {
        for (std::size_t k = 0; k <= last; ++k) {
            const double contrib = r * h0 * std::exp(-r * times[k]) * weight(k) * p_se[k];
            var += contrib * contrib;
        }
    }

    ReepEstimate est;
    est.value = r * h0 * integral;
    est.se = std::sqrt(var);
    est.tau_h = times[last];
    est.truncated = truncated;
    return est;
}

/// Indexed call decomposition: C = h0 - s0 + reep.
[[nodiscard]] inline double decompose_call(double h0, double s0, double reep) {
    detail::require_finite(h0, "h0");
    detail::require_finite(s0, "s0");
    detail::require_finite(reep, "reep");
    return h0 - s0 + reep;
}

}  // namespace capsig
