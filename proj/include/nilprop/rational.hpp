#pragma once

#include <cstdint>
#include <string>

namespace nilprop {

using uint128 = unsigned __int128;

/// Checked 128-bit helpers. Overflow raises std::overflow_error instead of wrapping.
uint128 checked_add(uint128 a, uint128 b);
uint128 checked_mul(uint128 a, uint128 b);
uint128 gcd_u128(uint128 a, uint128 b);
std::string to_string(uint128 v);

/// Exact non-negative rational number, always stored reduced
/// (gcd(num, den) = 1, den >= 1). 128-bit components; arithmetic is
/// overflow-checked. Subgroup-proportion values live in (0, 1].
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(uint128 numerator, uint128 denominator);

    uint128 num() const { return num_; }
    uint128 den() const { return den_; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    Rational operator*(const Rational& o) const;
    Rational operator+(const Rational& o) const;

    /// |a - b| as a non-negative rational.
    Rational abs_diff(const Rational& o) const;

    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_zero() const { return num_ == 0; }

    double to_double() const;

    /// "13/16"; whole values print without the denominator ("1").
    std::string str() const;

private:
    uint128 num_;
    uint128 den_;
};

} // namespace nilprop
