#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nilprop/errors.hpp"

namespace nilprop {

/// Which dihedral indexing populates the experiment:
///   Order     : J(D_n) = (tau(n)+s2(n))/(tau(n)+sigma(n)) over even n = 2..N
///   HalfOrder : the same function over n = 1..N/2 (group order 2n)
enum class DihedralIndexing { Order, HalfOrder };

struct Population {
    uint64_t max_order = 0;
    DihedralIndexing indexing = DihedralIndexing::Order;
    std::vector<double> values; // each in (0,1]; exactly 1 at 2-power orders
    double mu = 0.0;
    double sigma_pop = 0.0;     // divide-by-count convention
};

/// max_order even, >= 6; sieve memory cap applies.
Population build_population(uint64_t max_order,
                            DihedralIndexing indexing = DihedralIndexing::Order);

// ---------------------------------------------------------------------------
// Reproducibility contract: one master 64-bit seed. The replication stream
// for subset size k and replication index r is seeded with
//     mix64(master ^ mix64(k) ^ mix64(r + 0x9E3779B97F4A7C15))
// where mix64 is the splitmix64 finalizer; draws come from splitmix64 on
// that state, and indices are selected by rejection (no modulo bias).
// Results are therefore independent of execution order and thread count.
// ---------------------------------------------------------------------------

uint64_t mix64(uint64_t z);

/// `reps` standardized sample means Z = (mean of k draws - mu)/(sigma/sqrt(k)),
/// drawn uniformly with replacement from the population values.
std::vector<double> standardized_means(const Population& pop, uint64_t k,
                                       uint32_t reps, uint64_t seed,
                                       uint32_t threads = 1);

double normal_pdf(double x);

/// Phi(x), absolute error <= 1e-10 over the real line.
double normal_cdf(double x);

/// Phi^{-1}(u) for u in (0,1): rational approximation plus one Halley
/// refinement step against normal_cdf.
double normal_quantile(double u);

struct KsResult {
    double statistic; // D
    double p_value;
};

/// Asymptotic Kolmogorov p-value Q(sqrt(s)*D) with
/// Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2),
/// truncated when a term drops below 1e-10; clamped to [0,1].
double ks_p_value(double d, std::size_t sample_size);

/// One-sample KS test of the sample against the standard normal.
/// Requires sample size >= 10.
KsResult ks_test(std::vector<double> sample);

struct HistogramData {
    std::vector<double> edges;   // bins+1 ascending
    std::vector<double> density; // normalized to unit area
    std::vector<double> overlay; // standard normal pdf at bin midpoints
};

HistogramData histogram_data(std::span<const double> sample, uint32_t bins);

/// Sorted (theoretical, empirical) quantile pairs:
/// (Phi^{-1}((i-0.5)/s), z_(i)).
std::vector<std::pair<double, double>> qq_data(std::span<const double> sample);

struct SimulationConfig {
    uint64_t max_order = 1'000'000;
    std::vector<uint64_t> sizes;
    uint32_t replications = 1000;
    uint64_t seed = 0;
    uint32_t bins = 40;
    DihedralIndexing indexing = DihedralIndexing::Order;
    uint32_t threads = 1;
};

struct SizeReport {
    uint64_t size = 0;
    std::vector<double> z_values;
    double ks_statistic = 0.0;
    double p_value = 0.0;
    HistogramData histogram;
    std::vector<std::pair<double, double>> qq;
};

struct SimulationReport {
    SimulationConfig config;
    double mu = 0.0;
    double sigma_pop = 0.0;
    std::vector<SizeReport> per_size;
};

/// Full pipeline: population -> standardized means -> KS + plot data, one
/// section per subset size. Deterministic given the config (seed included);
/// thread count never changes the result.
SimulationReport run_experiment(const SimulationConfig& config);

} // namespace nilprop
