#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "perispec/errors.hpp"

namespace perispec {

using BigInt = boost::multiprecision::cpp_int;
// Always reduced, denominator > 0, sign carried by the numerator.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

// canonical construction from any sign pattern; den = 0 rejected
inline Rational make_rational(BigInt num, BigInt den) {
    if (den == 0) throw InputError("make_rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    return Rational(std::move(num), std::move(den));
}

inline bool is_integer(const Rational& r) { return rat_den(r) == 1; }

inline long long to_integer(const Rational& r, const std::string& what) {
    if (!is_integer(r))
        throw NumericsError(what + ": expected an integer, got " +
                            rat_num(r).str() + "/" + rat_den(r).str());
    return rat_num(r).convert_to<long long>();
}

inline std::string rat_str(const Rational& r) {
    if (is_integer(r)) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

inline BigInt big_gcd(BigInt a, BigInt b) { return boost::multiprecision::gcd(a, b); }

// x mod m in [0, m)
inline BigInt mod_floor(BigInt x, const BigInt& m) {
    BigInt r = x % m;
    if (r < 0) r += m;
    return r;
}

// multiplicative inverse mod m; requires gcd(x, m) = 1
inline BigInt mod_inverse(const BigInt& x, const BigInt& m) {
    BigInt a = mod_floor(x, m), b = m;
    BigInt u0 = 1, u1 = 0;
    while (b != 0) {
        BigInt q = a / b;
        BigInt t = a - q * b; a = b; b = t;
        t = u0 - q * u1; u0 = u1; u1 = t;
    }
    if (a != 1) throw InputError("mod_inverse: arguments are not coprime");
    return mod_floor(u0, m);
}

} // namespace perispec
