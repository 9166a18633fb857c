#include "nilprop/rational.hpp"

#include <stdexcept>

namespace nilprop {

uint128 checked_add(uint128 a, uint128 b) {
    uint128 r = a + b;
    if (r < a) throw std::overflow_error("128-bit addition overflow");
    return r;
}

uint128 checked_mul(uint128 a, uint128 b) {
    if (a == 0 || b == 0) return 0;
    uint128 r = a * b;
    if (r / a != b) throw std::overflow_error("128-bit multiplication overflow");
    return r;
}

uint128 gcd_u128(uint128 a, uint128 b) {
    while (b != 0) {
        uint128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string to_string(uint128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v != 0) {
        out.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    return {out.rbegin(), out.rend()};
}

Rational::Rational(uint128 numerator, uint128 denominator)
    : num_(numerator), den_(denominator) {
    if (den_ == 0) throw std::invalid_argument("rational: zero denominator");
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    uint128 g = gcd_u128(num_, den_);
    num_ /= g;
    den_ /= g;
}

bool Rational::operator<(const Rational& o) const {
    return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
}

Rational Rational::operator*(const Rational& o) const {
    // cross-reduce first so intermediate products stay small
    uint128 g1 = gcd_u128(num_, o.den_);
    uint128 g2 = gcd_u128(o.num_, den_);
    return Rational(checked_mul(num_ / g1, o.num_ / g2),
                    checked_mul(den_ / g2, o.den_ / g1));
}

Rational Rational::operator+(const Rational& o) const {
    uint128 g = gcd_u128(den_, o.den_);
    uint128 scaled = checked_mul(den_ / g, o.den_);
    return Rational(checked_add(checked_mul(num_, o.den_ / g),
                                checked_mul(o.num_, den_ / g)),
                    scaled);
}

Rational Rational::abs_diff(const Rational& o) const {
    uint128 lhs = checked_mul(num_, o.den_);
    uint128 rhs = checked_mul(o.num_, den_);
    uint128 diff = lhs >= rhs ? lhs - rhs : rhs - lhs;
    return Rational(diff, checked_mul(den_, o.den_));
}

double Rational::to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
    if (den_ == 1) return to_string(num_);
    return to_string(num_) + "/" + to_string(den_);
}

} // namespace nilprop
