#pragma once

#include <string>

#include "charlab/intlin.hpp"

namespace charlab {

/// Exact rational with reduced representation and positive denominator.
struct Rat {
    i64 num = 0;
    i64 den = 1;

    Rat() = default;
    Rat(i64 n) : num(n), den(1) {}
    Rat(i64 n, i64 d) {
        require(d != 0, errc::invalid_argument, "rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i64 g = gcd_i64(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        num = n;
        den = d;
    }

    bool is_zero() const { return num == 0; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat(narrow(i128(a.num) * b.den + i128(b.num) * a.den), mul_checked(a.den, b.den));
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return Rat(narrow(i128(a.num) * b.den - i128(b.num) * a.den), mul_checked(a.den, b.den));
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat(mul_checked(a.num, b.num), mul_checked(a.den, b.den));
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        require(b.num != 0, errc::invalid_argument, "rational division by zero");
        return Rat(mul_checked(a.num, b.den), mul_checked(a.den, b.num));
    }
    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

} // namespace charlab
