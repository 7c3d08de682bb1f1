#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace fracdrift {

// Exact rational scalar used by every parameter relation. Admissibility
// thresholds (a < alpha and friends) must never flip by rounding, so all
// derivations stay in cpp_rational and convert to double only at module
// boundaries.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// "a/b" as a reduced fraction, integers printed without the "/1".
inline std::string fraction_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "8/7", "-3", "0.05", "1.25e-2" style literals; everything is read
// exactly (decimals become power-of-ten fractions).
Rational parse_rational(const std::string& text);

inline Rational rational_pow(Rational base, long exp) {
    if (exp < 0) {
        if (base == 0) throw std::domain_error("rational_pow: 0 to negative power");
        base = Rational(denominator(base), numerator(base));
        exp = -exp;
    }
    Rational out{1};
    while (exp > 0) {
        if (exp & 1) out *= base;
        base *= base;
        exp >>= 1;
    }
    return out;
}

}  // namespace fracdrift
