#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace padiq {

// Exact arbitrary-precision scalars. cpp_rational keeps the canonical form
// invariants (denominator > 0, lowest terms) on every operation.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& x) { return boost::multiprecision::numerator(x); }
inline Integer den(const Rational& x) { return boost::multiprecision::denominator(x); }

inline Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

// cpp_rational's two-argument constructor rejects negative denominators
inline Rational make_rational(Integer n, Integer d) {
    if (d == 0) throw std::invalid_argument("make_rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    return Rational(std::move(n), std::move(d));
}

inline Integer pow(Integer base, unsigned long e) {
    Integer r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// Integer exponents, negative allowed.
inline Rational pow(const Rational& base, long long e) {
    if (e >= 0)
        return Rational(pow(num(base), static_cast<unsigned long>(e)),
                        pow(den(base), static_cast<unsigned long>(e)));
    if (base == 0) throw std::domain_error("pow: 0 to a negative exponent");
    return make_rational(pow(den(base), static_cast<unsigned long>(-e)),
                         pow(num(base), static_cast<unsigned long>(-e)));
}

inline Integer ceil_rational(const Rational& x) {
    Integer q = num(x) / den(x);
    if (num(x) > 0 && num(x) % den(x) != 0) ++q;
    return q;
}

inline Integer factorial(unsigned long n) {
    Integer r = 1;
    for (unsigned long i = 2; i <= n; ++i) r *= i;
    return r;
}

// Parses "a/b" or an integer literal.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer n(s.substr(0, slash));
        Integer d(s.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("parse_rational: zero denominator");
        return make_rational(std::move(n), std::move(d));
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("parse_rational: bad rational '" + s + "'");
    }
}

inline std::string to_string(const Rational& x) {
    if (den(x) == 1) return num(x).str();
    return num(x).str() + "/" + den(x).str();
}

}  // namespace padiq
