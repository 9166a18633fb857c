#include "nilprop/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nilprop/rational.hpp"

namespace nilprop {

namespace {

std::vector<uint32_t> sieve_primes(uint32_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<uint32_t> primes;
    for (uint32_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (uint64_t j = uint64_t(i) * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

// Primes up to 2^16 cover trial division for n <= 2^32; the big table
// (primes to 1e7, covering n <= 1e14) is built only when first needed.
const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> table = sieve_primes(1 << 16);
    return table;
}

const std::vector<uint32_t>& big_primes() {
    static const std::vector<uint32_t> table = sieve_primes(10'000'000);
    return table;
}

const std::vector<uint32_t>& primes_covering(uint64_t n) {
    if (n >> 32 == 0) return small_primes();
    return big_primes();
}

void check_positive(uint64_t n, const char* op) {
    if (n == 0) throw std::invalid_argument(std::string(op) + ": n must be >= 1");
}

} // namespace

Factorization factorize(uint64_t n) {
    check_positive(n, "factorize");
    if (n > kFactorizeLimit)
        throw std::invalid_argument("factorize: n exceeds the 1e14 trial-division limit");
    Factorization out;
    uint64_t rest = n;
    for (uint32_t p : primes_covering(n)) {
        if (uint64_t(p) * p > rest) break;
        if (rest % p != 0) continue;
        uint32_t e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (rest > 1) out.push_back({rest, 1});
    return out;
}

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    if (n > kFactorizeLimit)
        throw std::invalid_argument("is_prime: n exceeds the 1e14 trial-division limit");
    for (uint32_t p : primes_covering(n)) {
        if (uint64_t(p) * p > n) return true;
        if (n % p == 0) return n == p;
    }
    return true;
}

uint64_t tau(uint64_t n) {
    check_positive(n, "tau");
    uint64_t t = 1;
    for (const auto& [p, e] : factorize(n)) t *= e + 1;
    return t;
}

uint64_t sigma(uint64_t n) {
    check_positive(n, "sigma");
    uint128 s = 1;
    for (const auto& [p, e] : factorize(n)) {
        uint128 term = 1, power = 1;
        for (uint32_t i = 0; i < e; ++i) {
            power = checked_mul(power, p);
            term = checked_add(term, power);
        }
        s = checked_mul(s, term);
    }
    if (s > uint128(UINT64_MAX)) throw std::overflow_error("sigma: result exceeds 64 bits");
    return uint64_t(s);
}

uint32_t two_valuation(uint64_t n) {
    check_positive(n, "two_valuation");
    return uint32_t(std::countr_zero(n));
}

uint64_t odd_part(uint64_t n) {
    check_positive(n, "odd_part");
    return n >> std::countr_zero(n);
}

uint64_t s2(uint64_t n) {
    check_positive(n, "s2");
    // sum_{r=0..v} n/2^r = odd_part(n) * (2^(v+1) - 1)
    uint32_t v = two_valuation(n);
    uint128 s = checked_mul(odd_part(n), (uint128(1) << (v + 1)) - 1);
    if (s > uint128(UINT64_MAX)) throw std::overflow_error("s2: result exceeds 64 bits");
    return uint64_t(s);
}

// --- prime stream -----------------------------------------------------------

namespace {
constexpr uint64_t kSegmentSize = 1 << 17;
}

PrimeStream::PrimeStream() = default;

void PrimeStream::refill() {
    uint64_t lo = segment_lo_;
    uint64_t hi = lo + kSegmentSize;
    // grow base primes to cover sqrt(hi)
    uint64_t need = uint64_t(std::sqrt(double(hi))) + 2;
    if (need > base_limit_) {
        base_limit_ = std::max<uint64_t>(need * 2, 1 << 16);
        auto p32 = sieve_primes(uint32_t(base_limit_));
        base_.assign(p32.begin(), p32.end());
    }
    std::vector<bool> composite(kSegmentSize, false);
    for (uint64_t p : base_) {
        if (p * p >= hi) break;
        uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
        for (uint64_t j = start; j < hi; j += p) composite[j - lo] = true;
    }
    buffer_.clear();
    for (uint64_t i = lo; i < hi; ++i) {
        if (i >= 2 && !composite[i - lo]) buffer_.push_back(i);
    }
    pos_ = 0;
    segment_lo_ = hi;
}

uint64_t PrimeStream::next() {
    while (pos_ >= buffer_.size()) refill();
    return buffer_[pos_++];
}

uint64_t nth_prime(uint64_t k) {
    if (k == 0) throw std::invalid_argument("nth_prime: k must be >= 1");
    PrimeStream stream;
    uint64_t p = 0;
    for (uint64_t i = 0; i < k; ++i) p = stream.next();
    return p;
}

// --- divisor sieve ----------------------------------------------------------

DivisorSieve::DivisorSieve(uint64_t limit, uint64_t memory_cap) : limit_(limit) {
    if (limit == 0) throw std::invalid_argument("divisor sieve: limit must be >= 1");
    if (limit > memory_cap)
        throw ResourceLimitError("divisor sieve: limit " + std::to_string(limit) +
                                 " exceeds memory cap " + std::to_string(memory_cap));
    spf_.assign(limit + 1, 0);
    if (limit >= 1) spf_[1] = 1;
    for (uint64_t i = 2; i <= limit; ++i) {
        if (spf_[i] != 0) continue;
        for (uint64_t j = i; j <= limit; j += i) {
            if (spf_[j] == 0) spf_[j] = uint32_t(i);
        }
    }
}

uint64_t DivisorSieve::tau(uint64_t n) const {
    if (n == 0 || n > limit_) throw std::invalid_argument("divisor sieve: index out of range");
    uint64_t t = 1;
    while (n > 1) {
        uint32_t p = spf_[n];
        uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        t *= e + 1;
    }
    return t;
}

uint64_t DivisorSieve::sigma(uint64_t n) const {
    if (n == 0 || n > limit_) throw std::invalid_argument("divisor sieve: index out of range");
    uint64_t s = 1;
    while (n > 1) {
        uint32_t p = spf_[n];
        uint64_t term = 1, power = 1;
        while (n % p == 0) {
            n /= p;
            power *= p;
            term += power;
        }
        s *= term;
    }
    return s;
}

} // namespace nilprop
