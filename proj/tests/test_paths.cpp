#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "capsig/paths.hpp"

using namespace capsig;

namespace {

MarketParams base_market() {
    return {.mu_s = 0.05, .sigma_s = 0.2, .mu_i = 0.03, .sigma_i = 0.15,
            .rho = 0.5, .r = 0.05, .s0 = 100.0, .i0 = 1000.0};
}

}  // namespace

TEST_CASE("gbm rejects invalid parameters") {
    MarketParams m = base_market();
    SimGrid grid{.t_max = 1.0, .n_steps = 10, .n_paths = 4, .seed = 1};

    m.rho = 1.5;
    CHECK_THROWS_AS(simulate_correlated_gbm(m, grid), validation_error);
    m = base_market();
    m.mu_s = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(simulate_correlated_gbm(m, grid), validation_error);
    m = base_market();
    m.s0 = 0.0;
    CHECK_THROWS_AS(simulate_correlated_gbm(m, grid), validation_error);
    m = base_market();
    grid.n_steps = 0;
    CHECK_THROWS_AS(simulate_correlated_gbm(m, grid), validation_error);
}

TEST_CASE("zero volatility collapses to the deterministic exponential") {
    MarketParams m = base_market();
    m.sigma_s = 0.0;
    m.sigma_i = 0.0;
    const SimGrid grid{.t_max = 2.0, .n_steps = 16, .n_paths = 3, .seed = 5};
    const PathSet paths = simulate_correlated_gbm(m, grid);
    for (int p = 0; p < grid.n_paths; ++p) {
        for (int k = 0; k <= grid.n_steps; ++k) {
            const double expected = m.s0 * std::exp(m.mu_s * paths.times()[k]);
            CHECK(paths.stock_at(p, k) == Catch::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("perfect correlation with identical dynamics locks the ratio") {
    MarketParams m = base_market();
    m.rho = 1.0;
    m.mu_i = m.mu_s;
    m.sigma_i = m.sigma_s;
    const SimGrid grid{.t_max = 1.0, .n_steps = 64, .n_paths = 8, .seed = 11};
    const PathSet paths = simulate_correlated_gbm(m, grid);
    for (int p = 0; p < grid.n_paths; ++p) {
        for (int k = 0; k <= grid.n_steps; ++k) {
            CHECK(paths.stock_at(p, k) / m.s0 ==
                  Catch::Approx(paths.index_at(p, k) / m.i0).epsilon(1e-12));
        }
    }
}

TEST_CASE("column zero equals the initial levels exactly and paths stay positive") {
    const SimGrid grid{.t_max = 1.0, .n_steps = 32, .n_paths = 50, .seed = 3};
    const PathSet paths = simulate_correlated_gbm(base_market(), grid);
    for (int p = 0; p < grid.n_paths; ++p) {
        CHECK(paths.stock_at(p, 0) == 100.0);
        CHECK(paths.index_at(p, 0) == 1000.0);
        for (int k = 0; k <= grid.n_steps; ++k) {
            CHECK(paths.stock_at(p, k) > 0.0);
            CHECK(paths.index_at(p, k) > 0.0);
        }
    }
}

TEST_CASE("log-moments match the closed-form gbm oracle") {
    // E ln(S_T/s0) = (mu - sigma^2/2) T = 0.03, Var = sigma^2 T = 0.04.
    MarketParams m = base_market();
    m.mu_s = 0.05;
    m.sigma_s = 0.2;
    const SimGrid grid{.t_max = 1.0, .n_steps = 1, .n_paths = 100000, .seed = 71};
    const PathSet paths = simulate_correlated_gbm(m, grid);

    const int n = grid.n_paths;
    double mean = 0.0, m2 = 0.0;
    for (int p = 0; p < n; ++p) {
        const double x = std::log(paths.stock_at(p, 1) / m.s0);
        const double delta = x - mean;
        mean += delta / (p + 1);
        m2 += delta * (x - mean);
    }
    const double var = m2 / (n - 1);
    const double se_mean = 0.2 / std::sqrt(static_cast<double>(n));
    const double se_var = 0.04 * std::sqrt(2.0 / (n - 1.0));
    CHECK(std::abs(mean - 0.03) < 3.0 * se_mean);
    CHECK(std::abs(var - 0.04) < 3.0 * se_var);
}

TEST_CASE("log-increment correlation matches rho") {
    MarketParams m = base_market();
    m.rho = 0.5;
    const SimGrid grid{.t_max = 1.0, .n_steps = 4, .n_paths = 20000, .seed = 13};
    const PathSet paths = simulate_correlated_gbm(m, grid);

    double sxy = 0.0, sxx = 0.0, syy = 0.0, mx = 0.0, my = 0.0;
    int n = 0;
    for (int p = 0; p < grid.n_paths; ++p) {
        for (int k = 1; k <= grid.n_steps; ++k) {
            const double x = std::log(paths.stock_at(p, k) / paths.stock_at(p, k - 1));
            const double y = std::log(paths.index_at(p, k) / paths.index_at(p, k - 1));
            ++n;
            const double dx = x - mx;
            mx += dx / n;
            const double dy = y - my;
            my += dy / n;
            sxx += dx * (x - mx);
            syy += dy * (y - my);
            sxy += dx * (y - my);
        }
    }
    const double corr = sxy / std::sqrt(sxx * syy);
    const double se = (1.0 - m.rho * m.rho) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(corr - m.rho) < 3.0 * se);
}

TEST_CASE("same seed reproduces bit-identical paths") {
    const SimGrid grid{.t_max = 1.0, .n_steps = 20, .n_paths = 12, .seed = 77};
    const PathSet a = simulate_correlated_gbm(base_market(), grid);
    const PathSet b = simulate_correlated_gbm(base_market(), grid);
    CHECK(a == b);
}

TEST_CASE("path i does not depend on how many paths are simulated") {
    SimGrid grid{.t_max = 1.0, .n_steps = 20, .n_paths = 8, .seed = 99};
    const PathSet big = simulate_correlated_gbm(base_market(), grid);
    grid.n_paths = 4;
    const PathSet small = simulate_correlated_gbm(base_market(), grid);
    for (int p = 0; p < 4; ++p) {
        for (int k = 0; k <= grid.n_steps; ++k) {
            CHECK(big.stock_at(p, k) == small.stock_at(p, k));
            CHECK(big.index_at(p, k) == small.index_at(p, k));
        }
    }
}

TEST_CASE("antithetic variant rejects odd path counts") {
    const SimGrid grid{.t_max = 1.0, .n_steps = 8, .n_paths = 3, .seed = 1};
    CHECK_THROWS_AS(antithetic_variant(base_market(), grid), validation_error);
}

TEST_CASE("antithetic pair log-increments sum to twice the drift") {
    const MarketParams m = base_market();
    const SimGrid grid{.t_max = 1.0, .n_steps = 16, .n_paths = 2, .seed = 21};
    const PathSet paths = antithetic_variant(m, grid);
    const double dt = grid.t_max / grid.n_steps;
    const double two_drift_s = 2.0 * (m.mu_s - 0.5 * m.sigma_s * m.sigma_s) * dt;
    const double two_drift_i = 2.0 * (m.mu_i - 0.5 * m.sigma_i * m.sigma_i) * dt;
    for (int k = 1; k <= grid.n_steps; ++k) {
        const double inc_a = std::log(paths.stock_at(0, k) / paths.stock_at(0, k - 1));
        const double inc_b = std::log(paths.stock_at(1, k) / paths.stock_at(1, k - 1));
        CHECK(inc_a + inc_b == Catch::Approx(two_drift_s).margin(1e-12));
        const double jnc_a = std::log(paths.index_at(0, k) / paths.index_at(0, k - 1));
        const double jnc_b = std::log(paths.index_at(1, k) / paths.index_at(1, k - 1));
        CHECK(jnc_a + jnc_b == Catch::Approx(two_drift_i).margin(1e-12));
    }
}

TEST_CASE("antithetic pairs coincide at zero volatility") {
    MarketParams m = base_market();
    m.sigma_s = 0.0;
    m.sigma_i = 0.0;
    const SimGrid grid{.t_max = 1.0, .n_steps = 8, .n_paths = 4, .seed = 2};
    const PathSet paths = antithetic_variant(m, grid);
    for (int k = 0; k <= grid.n_steps; ++k) {
        CHECK(paths.stock_at(0, k) == paths.stock_at(1, k));
        CHECK(paths.stock_at(2, k) == paths.stock_at(3, k));
    }
}

TEST_CASE("antithetic estimator of the terminal mean agrees with plain mc") {
    const MarketParams m = base_market();
    const SimGrid grid{.t_max = 1.0, .n_steps = 1, .n_paths = 40000, .seed = 31};

    auto terminal_stats = [&](const PathSet& paths) {
        double mean = 0.0, m2 = 0.0;
        for (int p = 0; p < paths.n_paths(); ++p) {
            const double x = paths.stock_at(p, 1);
            const double delta = x - mean;
            mean += delta / (p + 1);
            m2 += delta * (x - mean);
        }
        const double se = std::sqrt(m2 / (paths.n_paths() - 1) / paths.n_paths());
        return std::pair{mean, se};
    };
    const auto [mean_plain, se_plain] = terminal_stats(simulate_correlated_gbm(m, grid));
    const auto [mean_anti, se_anti] = terminal_stats(antithetic_variant(m, grid));
    const double combined = std::sqrt(se_plain * se_plain + se_anti * se_anti);
    CHECK(std::abs(mean_plain - mean_anti) < 3.0 * combined);

    // Both should also sit near the analytic mean s0*exp(mu*T).
    const double exact = m.s0 * std::exp(m.mu_s * grid.t_max);
    CHECK(std::abs(mean_plain - exact) < 3.0 * se_plain);
    CHECK(std::abs(mean_anti - exact) < 3.0 * se_anti);
}
