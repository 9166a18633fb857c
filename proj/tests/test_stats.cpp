#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "nilprop/errors.hpp"
#include "nilprop/stats.hpp"
#include "normal_oracle.hpp"

using namespace nilprop;

namespace {

uint64_t rng_next(uint64_t& state) {
    return mix64(state += 0x9E3779B97F4A7C15ULL);
}

double rng_uniform(uint64_t& state) {
    return double(rng_next(state) >> 11) * 0x1.0p-53;
}

} // namespace

TEST_CASE("population: N = 6 has the three pinned values") {
    auto pop = build_population(6);
    REQUIRE(pop.values.size() == 3);
    CHECK(pop.values[0] == 1.0);               // J(D_2)
    CHECK(pop.values[1] == 1.0);               // J(D_4)
    CHECK(pop.values[2] == doctest::Approx(13.0 / 16.0).epsilon(1e-15));
    CHECK(pop.mu == doctest::Approx(45.0 / 48.0).epsilon(1e-15));
    CHECK(pop.sigma_pop > 0.0);
}

TEST_CASE("population: 2-power orders give exactly 1, everything in (0,1]") {
    auto pop = build_population(100'000);
    REQUIRE(pop.values.size() == 50'000);
    for (uint64_t order = 2; order <= 100'000; order *= 2)
        CHECK(pop.values[order / 2 - 1] == 1.0);
    for (double v : pop.values) {
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("population: argument and cap validation") {
    CHECK_THROWS_AS(build_population(5), std::invalid_argument);
    CHECK_THROWS_AS(build_population(4), std::invalid_argument);
    CHECK_THROWS_AS(build_population(20'000'002), ResourceLimitError);
}

TEST_CASE("half-order indexing differs from order indexing") {
    auto by_order = build_population(12);
    auto by_half = build_population(12, DihedralIndexing::HalfOrder);
    REQUIRE(by_order.values.size() == 6);
    REQUIRE(by_half.values.size() == 6);
    // entry for the order-12 group: (tau+s2)/(tau+sigma) at 12 vs at 6
    CHECK(by_order.values[5] == doctest::Approx(27.0 / 34.0).epsilon(1e-15));
    CHECK(by_half.values[5] == doctest::Approx(13.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("standardized means: degenerate population is rejected") {
    Population constant;
    constant.max_order = 8;
    constant.values = {0.5, 0.5, 0.5, 0.5};
    constant.mu = 0.5;
    constant.sigma_pop = 0.0;
    CHECK_THROWS_AS(standardized_means(constant, 3, 10, 1), DegeneratePopulationError);
}

TEST_CASE("standardized means: k = 1 obeys the law of large numbers") {
    auto pop = build_population(10'000);
    auto z = standardized_means(pop, 1, 100'000, 987654321);
    double mean = std::accumulate(z.begin(), z.end(), 0.0) / double(z.size());
    CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("standardized means: full-population draws have unit-ish variance") {
    auto pop = build_population(1'000'000);
    uint64_t k = pop.values.size();
    auto z = standardized_means(pop, k, 1000, 20250810, 4);
    double mean = std::accumulate(z.begin(), z.end(), 0.0) / double(z.size());
    double var = 0.0;
    for (double v : z) var += (v - mean) * (v - mean);
    var /= double(z.size());
    CHECK(var > 0.85);
    CHECK(var < 1.15);
}

TEST_CASE("standardized means: CLT-consistent moments at k >= 1000") {
    auto pop = build_population(1'000'000);
    const uint32_t reps = 1000;
    const double mean_band = 4.0 / std::sqrt(double(reps));
    const double var_band = 10.0 / std::sqrt(double(reps));
    for (uint64_t k : {1000ULL, 10'000ULL}) {
        auto z = standardized_means(pop, k, reps, 20250810, 4);
        double mean = std::accumulate(z.begin(), z.end(), 0.0) / double(z.size());
        double var = 0.0;
        for (double v : z) var += (v - mean) * (v - mean);
        var /= double(z.size());
        CHECK(std::abs(mean) < mean_band);
        CHECK(var > 1.0 - var_band);
        CHECK(var < 1.0 + var_band);
    }
}

TEST_CASE("standardized means: deterministic in seed, invariant in thread count") {
    auto pop = build_population(10'000);
    auto a = standardized_means(pop, 50, 200, 11);
    auto b = standardized_means(pop, 50, 200, 11);
    auto c = standardized_means(pop, 50, 200, 11, 3);
    CHECK(a == b);
    CHECK(a == c);
    auto d = standardized_means(pop, 50, 200, 12);
    CHECK(a != d);
}

TEST_CASE("normal cdf: pinned values, symmetry, tails") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-6));
    CHECK(normal_cdf(-8.0) < 1e-14);
    for (double x = -6.0; x <= 6.0; x += 0.17)
        CHECK(std::abs(normal_cdf(-x) - (1.0 - normal_cdf(x))) <= 1e-15);
}

TEST_CASE("normal cdf matches the quadrature oracle to 1e-10") {
    for (int i = 0; i <= 100; ++i) {
        double x = -8.0 + 16.0 * i / 100.0;
        CHECK(std::abs(normal_cdf(x) - oracle::normal_cdf_oracle(x)) <= 1e-10);
    }
}

TEST_CASE("normal quantile: pinned values and round trip") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
    for (double x = -5.0; x <= 5.0; x += 0.05)
        CHECK(std::abs(normal_quantile(normal_cdf(x)) - x) <= 1e-7);
    CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(-0.25), std::invalid_argument);
}

TEST_CASE("ks p-value: spot rows of the published table") {
    CHECK(ks_p_value(0.014614, 1000) == doctest::Approx(0.9832).epsilon(0.005));
    CHECK(ks_p_value(0.035131, 1000) == doctest::Approx(0.1694).epsilon(0.005));
    CHECK(ks_p_value(0.018089, 1000) == doctest::Approx(0.899).epsilon(0.005));
    CHECK(ks_p_value(0.0, 1000) == 1.0);
}

TEST_CASE("ks test: a uniform sample is decisively non-normal") {
    uint64_t state = 7;
    std::vector<double> uniform(1000);
    for (double& v : uniform) v = rng_uniform(state);
    auto r = ks_test(uniform);
    CHECK(r.statistic >= 0.5); // all mass on [0,1): the CDF gap at 0 is 1/2
    CHECK(r.p_value < 1e-6);
    CHECK_THROWS_AS(ks_test(std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST_CASE("ks test: quantile-spaced sample is as normal as it gets") {
    std::vector<double> sample;
    for (int i = 0; i < 1000; ++i) sample.push_back(normal_quantile((i + 0.5) / 1000.0));
    auto r = ks_test(sample);
    CHECK(r.statistic < 0.001);
    CHECK(r.p_value > 0.999);
}

TEST_CASE("histogram: constant sample occupies one bin") {
    std::vector<double> constant(50, 1.25);
    auto h = histogram_data(constant, 5);
    int occupied = 0;
    for (double d : h.density) occupied += d > 0.0;
    CHECK(occupied == 1);
}

TEST_CASE("histogram: unit area and overlay at the center") {
    std::vector<double> symmetric{-2.0, -1.0, 0.0, 1.0, 2.0};
    auto h = histogram_data(symmetric, 5);
    CHECK(h.overlay[2] == doctest::Approx(0.3989422804).epsilon(1e-9)); // pdf(0)

    uint64_t state = 8;
    std::vector<double> sample(100'000);
    for (double& v : sample) v = normal_quantile(std::clamp(rng_uniform(state), 1e-12, 1.0 - 1e-12));
    auto big = histogram_data(sample, 40);
    double area = 0.0;
    for (std::size_t i = 0; i < big.density.size(); ++i)
        area += big.density[i] * (big.edges[i + 1] - big.edges[i]);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(histogram_data(std::vector<double>{}, 10), std::invalid_argument);
    CHECK_THROWS_AS(histogram_data(symmetric, 4), std::invalid_argument);
}

TEST_CASE("qq data: fixed point and location shift") {
    std::vector<double> quantiles;
    for (int i = 0; i < 200; ++i) quantiles.push_back(normal_quantile((i + 0.5) / 200.0));
    auto pairs = qq_data(quantiles);
    for (const auto& [t, e] : pairs) CHECK(std::abs(t - e) <= 1e-6);

    std::vector<double> shifted;
    for (double q : quantiles) shifted.push_back(q + 1.0);
    auto pairs2 = qq_data(shifted);
    for (std::size_t i = 0; i + 1 < pairs2.size(); ++i)
        CHECK(pairs2[i].first <= pairs2[i + 1].first);
    for (const auto& [t, e] : pairs2) CHECK(std::abs(e - (t + 1.0)) <= 1e-6);
}

TEST_CASE("run_experiment: structure, boundaries, determinism") {
    SimulationConfig config;
    config.max_order = 10'000;
    config.sizes = {30, 100, 1000};
    config.replications = 200;
    config.seed = 5;
    config.bins = 12;

    auto report = run_experiment(config);
    REQUIRE(report.per_size.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(report.per_size[i].size == config.sizes[i]);
        CHECK(report.per_size[i].z_values.size() == 200);
        CHECK(report.per_size[i].p_value >= 0.0);
        CHECK(report.per_size[i].p_value <= 1.0);
        CHECK(report.per_size[i].qq.size() == 200);
        CHECK(report.per_size[i].histogram.density.size() == 12);
    }

    auto again = run_experiment(config);
    config.threads = 3;
    auto threaded = run_experiment(config);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(report.per_size[i].z_values == again.per_size[i].z_values);
        CHECK(report.per_size[i].z_values == threaded.per_size[i].z_values);
    }

    SimulationConfig tiny = config;
    tiny.replications = 2;
    auto small = run_experiment(tiny); // boundary: minimum replications
    CHECK(small.per_size[0].z_values.size() == 2);

    SimulationConfig bad = config;
    bad.sizes = {};
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
}

TEST_CASE("seeded experiment at k = 1e4: central Q-Q points hug the diagonal") {
    SimulationConfig config;
    config.max_order = 1'000'000;
    config.sizes = {10'000};
    config.replications = 1000;
    config.seed = 42;
    auto report = run_experiment(config);
    const auto& qq = report.per_size[0].qq;
    // central 98% of points
    std::size_t lo = qq.size() / 100, hi = qq.size() - qq.size() / 100;
    for (std::size_t i = lo; i < hi; ++i)
        CHECK(std::abs(qq[i].second - qq[i].first) < 0.25);
}
