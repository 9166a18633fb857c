#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nilprop/rational.hpp"

namespace nilprop {

// ---------------------------------------------------------------------------
// Finite products of J(D_{2^m p_n}) over sets of prime indices are dense in
// (0,1]. The constructive side works in log space: with
// x_n = -ln J(D_{2^m p_n}) > 0, x_n -> 0 and sum x_n diverges, so greedy
// subsequence sums approximate any T = -ln(target) >= 0.
// ---------------------------------------------------------------------------

struct DensityQuery {
    double target;        // in (0, 1]
    uint32_t m = 2;       // >= 2
    double epsilon;       // log-space tolerance, 0 < epsilon < 1
    uint64_t max_terms;   // scan budget (indices examined)
};

struct DensityResult {
    std::vector<uint64_t> chosen;        // ascending prime indices, each >= 2
    std::vector<uint64_t> chosen_primes; // p_n for each chosen index
    double product = 1.0;                // prod of chosen J values (exp(-sum x_n))
    double log_error = 0.0;              // |(-ln product) - (-ln target)|
    uint64_t terms_scanned = 0;
};

/// Budget exhausted before reaching the tolerance; carries the best partial
/// approximation found.
class BudgetExceededError : public std::runtime_error {
public:
    BudgetExceededError(std::string what, DensityResult best)
        : std::runtime_error(std::move(what)), partial(std::move(best)) {}

    DensityResult partial;
};

/// Exact J(D_{2^m p}) for odd prime p:
/// (2(m+1) + p(2^(m+1)-1)) / (2(m+1) + (2^(m+1)-1)(1+p)).
Rational j_closed_form(uint32_t m, uint64_t p);

/// x_n = -ln J(D_{2^m p_n}), n >= 2 (index 1 is p=2: a 2-group, x would be 0).
double x_term(uint32_t m, uint64_t n);

/// Same term from the prime itself; evaluated as log1p(c/(a+c*p)) with
/// a = 2(m+1), c = 2^(m+1)-1, accurate for large p.
double x_term_for_prime(uint32_t m, uint64_t p);

struct DivergencePoint {
    uint64_t n;
    double partial_sum;   // sum of x_k, k = 2..n
    double reference_sum; // sum of c/(k ln k), c = 2(m+1)/(2^(m+1)-1)
};

/// Partial sums of x_n against the scaled reference series c/(n ln n),
/// for n = 2..count+1. Both columns are strictly increasing.
std::vector<DivergencePoint> divergence_diagnostic(uint32_t m, uint64_t count);

/// Greedy subsequence-sum approximation of T = -ln(target): scan n = 2,3,...
/// and include n whenever running + x_n <= T; success when T - running <=
/// epsilon. Throws BudgetExceededError when max_terms indices are scanned
/// first, std::invalid_argument on a malformed query.
DensityResult approximate_target(const DensityQuery& query);

} // namespace nilprop
