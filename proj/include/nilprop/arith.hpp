#pragma once

#include <cstdint>
#include <vector>

#include "nilprop/errors.hpp"

namespace nilprop {

struct PrimePower {
    uint64_t prime;
    uint32_t exponent;

    bool operator==(const PrimePower&) const = default;
};

/// Prime-power decomposition, primes strictly ascending. Empty list is 1.
using Factorization = std::vector<PrimePower>;

/// Largest input accepted by factorize/tau/sigma (trial division by primes
/// up to sqrt(n) stays feasible up to here).
inline constexpr uint64_t kFactorizeLimit = 100'000'000'000'000ULL; // 1e14

Factorization factorize(uint64_t n);
bool is_prime(uint64_t n);

/// Number of positive divisors of n.
uint64_t tau(uint64_t n);

/// Sum of positive divisors of n.
uint64_t sigma(uint64_t n);

/// Sum of n/2^r over all r >= 0 with 2^r | n. Equals odd_part(n) * (2^(v+1) - 1)
/// where 2^v exactly divides n.
uint64_t s2(uint64_t n);

uint32_t two_valuation(uint64_t n);
uint64_t odd_part(uint64_t n);

/// k-th prime, 1-indexed (nth_prime(1) = 2).
uint64_t nth_prime(uint64_t k);

/// Incremental prime generator backed by a segmented sieve. next() yields
/// 2, 3, 5, ... with no fixed upper bound.
class PrimeStream {
public:
    PrimeStream();
    uint64_t next();

private:
    void refill();

    std::vector<uint64_t> base_;   // primes covering sqrt of the current segment
    std::vector<uint64_t> buffer_; // primes inside the current segment
    std::size_t pos_ = 0;
    uint64_t segment_lo_ = 0;
    uint64_t base_limit_ = 0;
};

/// Bulk tau/sigma for 1..limit via a smallest-prime-factor table
/// (~4 bytes/entry); per-index values are reconstructed on access.
/// Immutable after construction and shareable across threads.
class DivisorSieve {
public:
    static constexpr uint64_t kDefaultCap = 10'000'000;

    explicit DivisorSieve(uint64_t limit, uint64_t memory_cap = kDefaultCap);

    uint64_t limit() const { return limit_; }
    uint64_t tau(uint64_t n) const;
    uint64_t sigma(uint64_t n) const;

private:
    uint64_t limit_;
    std::vector<uint32_t> spf_;
};

} // namespace nilprop
