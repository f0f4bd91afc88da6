#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "capsig/errors.hpp"

namespace capsig {

namespace detail {
inline void require_finite(double v, const std::string& field) {
    if (!std::isfinite(v)) throw validation_error(field, "must be finite");
}
}  // namespace detail

/// Market dynamics for the firm's stock S and the peer index I.
/// Drifts are per year, volatilities per sqrt(year).
struct MarketParams {
    double mu_s = 0.0;     ///< stock drift
    double sigma_s = 0.0;  ///< stock volatility
    double mu_i = 0.0;     ///< index drift (the index SDE gets its own drift; callers may set it equal to mu_s)
    double sigma_i = 0.0;  ///< index volatility
    double rho = 0.0;      ///< stock/index correlation in [-1,1]
    double r = 0.0;        ///< risk-free rate
    double s0 = 1.0;       ///< initial stock price (> 0)
    double i0 = 1.0;       ///< initial index level (> 0)

    void validate(const std::string& prefix = "market") const {
        detail::require_finite(mu_s, prefix + ".mu_s");
        detail::require_finite(sigma_s, prefix + ".sigma_s");
        detail::require_finite(mu_i, prefix + ".mu_i");
        detail::require_finite(sigma_i, prefix + ".sigma_i");
        detail::require_finite(rho, prefix + ".rho");
        detail::require_finite(r, prefix + ".r");
        detail::require_finite(s0, prefix + ".s0");
        detail::require_finite(i0, prefix + ".i0");
        if (sigma_s < 0.0) throw validation_error(prefix + ".sigma_s", "must be >= 0");
        if (sigma_i < 0.0) throw validation_error(prefix + ".sigma_i", "must be >= 0");
        if (rho < -1.0 || rho > 1.0) throw validation_error(prefix + ".rho", "must lie in [-1,1]");
        if (!(s0 > 0.0)) throw validation_error(prefix + ".s0", "must be > 0");
        if (!(i0 > 0.0)) throw validation_error(prefix + ".i0", "must be > 0");
    }

    friend bool operator==(const MarketParams&, const MarketParams&) = default;
};

/// Simulation grid and reproducibility seed.
struct SimGrid {
    double t_max = 1.0;       ///< horizon in years (> 0)
    int n_steps = 1;          ///< time steps (>= 1)
    int n_paths = 1;          ///< path count (>= 1)
    std::uint64_t seed = 0;   ///< reproducibility seed

    [[nodiscard]] double dt() const noexcept { return t_max / n_steps; }

    void validate(const std::string& prefix = "grid") const {
        detail::require_finite(t_max, prefix + ".t_max");
        if (!(t_max > 0.0)) throw validation_error(prefix + ".t_max", "must be > 0");
        if (n_steps < 1) throw validation_error(prefix + ".n_steps", "must be >= 1");
        if (n_paths < 1) throw validation_error(prefix + ".n_paths", "must be >= 1");
    }

    friend bool operator==(const SimGrid&, const SimGrid&) = default;
};

/// Correlated stock/index realizations on a shared time grid. Immutable
/// after construction; safe to share read-only across threads.
class PathSet {
public:
    PathSet(std::vector<double> times, int n_paths, std::vector<double> stock,
            std::vector<double> index)
        : times_(std::move(times)),
          n_paths_(n_paths),
          stock_(std::move(stock)),
          index_(std::move(index)) {}

    [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
    [[nodiscard]] int n_paths() const noexcept { return n_paths_; }
    [[nodiscard]] int n_points() const noexcept { return static_cast<int>(times_.size()); }

    [[nodiscard]] std::span<const double> stock(int path) const {
        return {stock_.data() + static_cast<std::size_t>(path) * times_.size(), times_.size()};
    }
    [[nodiscard]] std::span<const double> index(int path) const {
        return {index_.data() + static_cast<std::size_t>(path) * times_.size(), times_.size()};
    }

    [[nodiscard]] double stock_at(int path, int k) const {
        return stock_[static_cast<std::size_t>(path) * times_.size() + k];
    }
    [[nodiscard]] double index_at(int path, int k) const {
        return index_[static_cast<std::size_t>(path) * times_.size() + k];
    }

    friend bool operator==(const PathSet&, const PathSet&) = default;

private:
    std::vector<double> times_;
    int n_paths_;
    std::vector<double> stock_;
    std::vector<double> index_;
};

}  // namespace capsig
