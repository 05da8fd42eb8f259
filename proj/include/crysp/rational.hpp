#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "crysp/error.hpp"

namespace crysp {

/* Exact fraction for valuations. Denominators stay tiny (they divide the
 * ramification index times a p-power), so int64 is plenty. */
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw err("ZeroDenominator", "rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend Rational operator+(Rational a, Rational b) { return Rational(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rational operator-(Rational a, Rational b) { return Rational(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/* Valuation result: either an exact rational, or "at least `bound`" when the
 * element vanishes at the working precision. */
struct Valuation {
    Rational value;
    bool capped = false;  // true: actual valuation is >= value (precision cap)

    static Valuation exact(Rational v) { return Valuation{v, false}; }
    static Valuation at_least(Rational v) { return Valuation{v, true}; }

    std::string str() const { return capped ? (">=" + value.str()) : value.str(); }
    friend bool operator==(const Valuation& a, const Valuation& b) {
        return a.capped == b.capped && a.value == b.value;
    }
};

}  // namespace crysp
