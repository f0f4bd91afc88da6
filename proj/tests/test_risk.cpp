#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "capsig/risk.hpp"
#include "capsig/rng.hpp"

using namespace capsig;

namespace {

/// Terminal firm values v0 * exp((r - sigma^2/2) t + sigma sqrt(t) z) on a
/// shared draw vector, so regimes stay matched.
std::vector<double> value_draws(double v0, double sigma, double r, double t,
                                const std::vector<double>& z) {
    std::vector<double> values(z.size());
    const double drift = (r - 0.5 * sigma * sigma) * t;
    const double vol = sigma * std::sqrt(t);
    for (std::size_t j = 0; j < z.size(); ++j) values[j] = v0 * std::exp(drift + vol * z[j]);
    return values;
}

}  // namespace

TEST_CASE("x1 samples basics") {
    const std::vector<double> constant(100, 90.0);
    const auto x1 = x1_samples(constant, 80.0, 0.05, 0.2, 0.5, 1.0);
    CHECK(x1.size() == constant.size());
    // identical paths: dispersion collapses to the accumulation floor
    CHECK(sample_variance(x1) == Catch::Approx(0.0).margin(1e-28));
    CHECK(x1[0] == x1[99]);

    CHECK_THROWS_AS(x1_samples({}, 80.0, 0.05, 0.2, 0.5, 1.0), validation_error);
    CHECK_THROWS_AS(x1_samples(constant, 0.0, 0.05, 0.2, 0.5, 1.0), validation_error);
    CHECK_THROWS_AS(x1_samples(constant, 80.0, 0.05, 0.0, 0.5, 1.0), validation_error);
    CHECK_THROWS_AS(x1_samples(constant, 80.0, 0.05, 0.2, 1.0, 1.0), validation_error);

    const std::vector<double> bad = {100.0, -1.0};
    CHECK_THROWS_AS(x1_samples(bad, 80.0, 0.05, 0.2, 0.5, 1.0), numeric_error);
}

TEST_CASE("x1 variance equals the scaled log-value variance") {
    const auto z = normal_draws(404, 20000);
    const double sigma = 0.25, r = 0.05, t_e = 0.5, maturity = 1.0;
    const auto values = value_draws(100.0, sigma, r, t_e, z);
    const auto x1 = x1_samples(values, 80.0, r, sigma, t_e, maturity);

    std::vector<double> log_ratio(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) log_ratio[j] = std::log(values[j] / 80.0);
    const double tau = maturity - t_e;
    const double scaled = sample_variance(log_ratio) / (sigma * sigma * tau);
    CHECK(sample_variance(x1) == Catch::Approx(scaled).epsilon(1e-10));
}

TEST_CASE("signal-regime x1 variance dominates on matched draws") {
    const auto z = normal_draws(909, 50000);
    const double sigma = 0.2, sigma_theta = 0.2088, r = 0.05, t_e = 0.5, maturity = 1.0;
    const auto base_values = value_draws(100.0, sigma, r, t_e, z);
    const auto signal_values = value_draws(100.0, sigma_theta, r, t_e, z);

    // x1 evaluated at the reporting volatility in both regimes
    const auto x1_base = x1_samples(base_values, 80.0, r, sigma, t_e, maturity);
    const auto x1_signal = x1_samples(signal_values, 80.0, r, sigma, t_e, maturity);
    const double ratio = sample_variance(x1_signal) / sample_variance(x1_base);
    CHECK(ratio == Catch::Approx((sigma_theta / sigma) * (sigma_theta / sigma)).epsilon(1e-9));
    CHECK(sample_variance(x1_signal) > sample_variance(x1_base));
}

TEST_CASE("tail probability") {
    const std::vector<double> symmetric = {-2.0, -1.0, 1.0, 2.0};
    CHECK(tail_probability(symmetric, 1.5).p == 0.25);
    CHECK(tail_probability(symmetric, 100.0).p == 0.0);
    CHECK(tail_probability(std::vector<double>(10, 0.0), 0.5).p == 0.0);
    CHECK_THROWS_AS(tail_probability({}, 1.0), validation_error);

    const ProbEstimate est = tail_probability(symmetric, 0.5);
    CHECK(est.p == 0.5);
    CHECK(est.se == Catch::Approx(std::sqrt(0.25 / 4.0)).epsilon(1e-14));
}

TEST_CASE("chebyshev bound") {
    CHECK(chebyshev_bound(0.0, 1.0, 0.5) == 0.0);
    CHECK(chebyshev_bound(0.25, 1.0, 0.5) == Catch::Approx(0.125).epsilon(1e-14));
    CHECK(chebyshev_bound(100.0, 1.0, 1.0) == 1.0);  // clamped
    CHECK_THROWS_AS(chebyshev_bound(0.25, 0.0, 0.5), validation_error);
}

TEST_CASE("chebyshev bound dominates empirical centered tails") {
    const int n = 100000;
    const auto z = normal_draws(2222, n);

    auto check_distribution = [&](const std::vector<double>& samples, double lambda) {
        double mean = 0.0;
        for (double s : samples) mean += s;
        mean /= static_cast<double>(samples.size());
        std::vector<double> centered(samples.size());
        for (std::size_t j = 0; j < samples.size(); ++j) centered[j] = samples[j] - mean;
        const double bound = chebyshev_bound(sample_variance(centered), lambda, 0.5);
        const double tail = tail_probability(centered, lambda).p;
        CHECK(bound >= tail);
    };

    // gaussian
    std::vector<double> gauss(z.begin(), z.end());
    check_distribution(gauss, 1.5);
    check_distribution(gauss, 2.0);

    // uniform on [-1, 1] via the probability transform
    std::vector<double> uniform(n);
    for (int j = 0; j < n; ++j) uniform[j] = 2.0 * normal_cdf(z[j]) - 1.0;
    check_distribution(uniform, 0.8);

    // symmetric two-point at +-1
    std::vector<double> two_point(n);
    for (int j = 0; j < n; ++j) two_point[j] = z[j] > 0.0 ? 1.0 : -1.0;
    check_distribution(two_point, 0.9);
}

TEST_CASE("var estimate") {
    CHECK(var_estimate(std::vector<double>(25, 3.5), 0.5) == 3.5);
    CHECK(var_estimate(std::vector<double>(25, 3.5), 0.99) == 3.5);
    CHECK_THROWS_AS(var_estimate({}, 0.99), validation_error);
    CHECK_THROWS_AS(var_estimate(std::vector<double>{1.0}, 0.0), validation_error);
    CHECK_THROWS_AS(var_estimate(std::vector<double>{1.0}, 1.0), validation_error);

    // interpolation between order statistics
    const std::vector<double> four = {1.0, 2.0, 3.0, 4.0};
    CHECK(var_estimate(four, 0.5) == Catch::Approx(2.5).epsilon(1e-14));
    CHECK(var_estimate(four, 0.75) == Catch::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("var estimate matches the normal quantile oracle") {
    const int n = 200000;
    const auto losses = normal_draws(3030, n);
    const double conf = 0.99;
    const double est = var_estimate(losses, conf);
    const double exact = normal_quantile(conf);
    const double se = std::sqrt(conf * (1.0 - conf) / n) / normal_pdf(exact);
    CHECK(std::abs(est - exact) < 3.0 * se);
}

TEST_CASE("var estimator properties") {
    const auto z = normal_draws(4040, 5000);
    std::vector<double> losses(z.begin(), z.end());

    // non-decreasing in confidence
    double prev = -1e300;
    for (double c = 0.05; c < 1.0; c += 0.05) {
        const double cur = var_estimate(losses, c);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }

    // translation equivariance
    std::vector<double> shifted(losses.size());
    for (std::size_t j = 0; j < losses.size(); ++j) shifted[j] = losses[j] + 7.25;
    CHECK(var_estimate(shifted, 0.99) ==
          Catch::Approx(var_estimate(losses, 0.99) + 7.25).margin(1e-9));
}

TEST_CASE("signal var dominates on matched draws") {
    const auto z = normal_draws(5050, 50000);
    const double r = 0.05, t_e = 0.5;
    const auto base_values = value_draws(100.0, 0.2, r, t_e, z);
    const auto signal_values = value_draws(100.0, 0.24, r, t_e, z);
    std::vector<double> base_losses(z.size()), signal_losses(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        base_losses[j] = 100.0 - base_values[j];
        signal_losses[j] = 100.0 - signal_values[j];
    }
    CHECK(var_estimate(signal_losses, 0.99) >= var_estimate(base_losses, 0.99));
}

TEST_CASE("bankruptcy comparison") {
    const TailConfig cfg{.lambda = 1.0, .phi_frac = 0.5, .eval_time = 0.5, .confidence = 0.99};
    const auto z = normal_draws(6060, 50000);
    const double r = 0.05, t_e = 0.5, maturity = 1.0;

    auto regime = [&](double sigma_paths, double sigma_report) {
        RegimeSamples samples;
        const auto values = value_draws(100.0, sigma_paths, r, t_e, z);
        samples.x1 = x1_samples(values, 80.0, r, sigma_report, t_e, maturity);
        samples.losses.resize(values.size());
        for (std::size_t j = 0; j < values.size(); ++j) samples.losses[j] = 100.0 - values[j];
        return samples;
    };

    // identical regimes: equal fields, no flag
    const RegimeSamples base = regime(0.2, 0.2);
    const TailRiskReport same = bankruptcy_compare(base, base, cfg);
    CHECK(same.var_x1_signal == same.var_x1_nosignal);
    CHECK(same.tail_prob_signal == same.tail_prob_nosignal);
    CHECK(same.var_signal == same.var_nosignal);
    CHECK_FALSE(same.bankruptcy_flag);

    // rising labor beta widens the signal tail monotonically
    double prev_tail = -1.0;
    for (double sigma_theta : {0.2, 0.21, 0.23, 0.26, 0.3}) {
        const TailRiskReport report = bankruptcy_compare(regime(sigma_theta, 0.2), base, cfg);
        CHECK(report.tail_prob_signal >= prev_tail);
        CHECK(report.tail_prob_signal >= report.tail_prob_nosignal);
        CHECK(report.var_x1_signal >= report.var_x1_nosignal);
        prev_tail = report.tail_prob_signal;
    }

    RegimeSamples mismatched = base;
    mismatched.x1.pop_back();
    CHECK_THROWS_AS(bankruptcy_compare(mismatched, base, cfg), validation_error);
}

TEST_CASE("tail config validation") {
    TailConfig cfg{.lambda = 1.0, .phi_frac = 0.5, .eval_time = 0.5, .confidence = 0.99};
    CHECK_NOTHROW(cfg.validate(1.0));
    cfg.lambda = 0.0;
    CHECK_THROWS_AS(cfg.validate(1.0), validation_error);
    cfg = {.lambda = 1.0, .phi_frac = 1.5, .eval_time = 0.5, .confidence = 0.99};
    CHECK_THROWS_AS(cfg.validate(1.0), validation_error);
    cfg = {.lambda = 1.0, .phi_frac = 0.5, .eval_time = 1.5, .confidence = 0.99};
    CHECK_THROWS_AS(cfg.validate(1.0), validation_error);
    cfg = {.lambda = 1.0, .phi_frac = 0.5, .eval_time = 0.5, .confidence = 1.0};
    CHECK_THROWS_AS(cfg.validate(1.0), validation_error);
}
