#include "nilprop/density.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nilprop/arith.hpp"

namespace nilprop {

namespace {

void check_m(uint32_t m) {
    if (m < 2 || m > 40) throw std::invalid_argument("density: m must be in [2, 40]");
}

// J(D_{2^m p}) = (a + p c) / (a + c(1 + p)) with a = 2(m+1), c = 2^(m+1)-1
struct ClosedFormCoef {
    double a;
    double c;
};

ClosedFormCoef coef(uint32_t m) {
    return {2.0 * (m + 1), double((uint64_t(1) << (m + 1)) - 1)};
}

} // namespace

Rational j_closed_form(uint32_t m, uint64_t p) {
    check_m(m);
    if (p == 2 || !is_prime(p))
        throw std::invalid_argument("j_closed_form: p must be an odd prime");
    uint128 a = 2 * (uint64_t(m) + 1);
    uint128 c = (uint128(1) << (m + 1)) - 1;
    return Rational(checked_add(a, checked_mul(c, p)),
                    checked_add(a, checked_mul(c, checked_add(p, 1))));
}

double x_term_for_prime(uint32_t m, uint64_t p) {
    check_m(m);
    auto [a, c] = coef(m);
    // -ln J = ln(1 + c/(a + c p)); log1p keeps precision once p is large
    return std::log1p(c / (a + c * double(p)));
}

double x_term(uint32_t m, uint64_t n) {
    check_m(m);
    if (n < 2) throw std::invalid_argument("x_term: index must be >= 2 (index 1 is p = 2)");
    return x_term_for_prime(m, nth_prime(n));
}

std::vector<DivergencePoint> divergence_diagnostic(uint32_t m, uint64_t count) {
    check_m(m);
    if (count < 10) throw std::invalid_argument("divergence_diagnostic: count must be >= 10");
    auto [a, c] = coef(m);
    double ref_scale = a / c; // 2(m+1)/(2^(m+1)-1)

    std::vector<DivergencePoint> out;
    out.reserve(count);
    PrimeStream primes;
    primes.next(); // skip p_1 = 2
    double sum = 0.0, ref = 0.0;
    for (uint64_t n = 2; n <= count + 1; ++n) {
        sum += x_term_for_prime(m, primes.next());
        ref += ref_scale / (double(n) * std::log(double(n)));
        out.push_back({n, sum, ref});
    }
    return out;
}

DensityResult approximate_target(const DensityQuery& query) {
    if (!(query.target > 0.0) || !(query.target <= 1.0))
        throw std::invalid_argument("density: target must lie in (0, 1]");
    if (!(query.epsilon > 0.0) || !(query.epsilon < 1.0))
        throw std::invalid_argument("density: epsilon must lie in (0, 1)");
    if (query.max_terms == 0) throw std::invalid_argument("density: max_terms must be >= 1");
    check_m(query.m);

    const double target_log = -std::log(query.target);
    // absorbs the last-ulp mismatch between -log(target) and summed log1p terms
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + target_log);

    DensityResult result;
    double running = 0.0;
    if (target_log <= query.epsilon) {
        result.log_error = target_log;
        return result;
    }

    PrimeStream primes;
    primes.next(); // p_1 = 2 contributes x = 0 and is excluded
    for (uint64_t n = 2; result.terms_scanned < query.max_terms; ++n) {
        uint64_t p = primes.next();
        ++result.terms_scanned;
        double x = x_term_for_prime(query.m, p);
        if (running + x <= target_log + slack) {
            running += x;
            result.chosen.push_back(n);
            result.chosen_primes.push_back(p);
            if (target_log - running <= query.epsilon) {
                result.product = std::exp(-running);
                result.log_error = std::abs(target_log - running);
                return result;
            }
        }
    }

    result.product = std::exp(-running);
    result.log_error = std::abs(target_log - running);
    throw BudgetExceededError(
        "density: scanned " + std::to_string(result.terms_scanned) +
            " indices without reaching tolerance " + std::to_string(query.epsilon) +
            " (remaining log gap " + std::to_string(result.log_error) + ")",
        std::move(result));
}

} // namespace nilprop
