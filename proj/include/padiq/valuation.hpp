#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "padiq/prime.hpp"
#include "padiq/rational.hpp"

namespace padiq {

// A place of Q: the archimedean place or a finite place given by a prime.
class Place {
public:
    static Place archimedean() { return Place(std::nullopt); }
    static Place finite(Prime p) { return Place(p); }

    bool is_archimedean() const { return !prime_.has_value(); }
    bool is_finite() const { return prime_.has_value(); }
    const Prime& prime() const {
        if (!prime_) throw std::logic_error("Place: archimedean place has no prime");
        return *prime_;
    }

    std::string str() const { return is_archimedean() ? "inf" : std::to_string(prime_->value()); }

    friend bool operator==(const Place&, const Place&) = default;
    friend bool operator<(const Place& a, const Place& b) {
        // finite places in prime order, then the archimedean place
        if (a.is_finite() && b.is_finite()) return a.prime() < b.prime();
        return a.is_finite() && b.is_archimedean();
    }

private:
    explicit Place(std::optional<Prime> p) : prime_(p) {}
    std::optional<Prime> prime_;
};

// ord_p value: an integer, or +inf exactly for the zero element.
class Valuation {
public:
    static Valuation infinity() { return Valuation(true, 0); }
    static Valuation of(long long v) { return Valuation(false, v); }

    bool is_infinity() const { return infinite_; }
    long long finite_value() const {
        if (infinite_) throw std::logic_error("Valuation: +inf has no finite value");
        return value_;
    }

    std::string str() const { return infinite_ ? "+inf" : std::to_string(value_); }

    friend bool operator==(const Valuation&, const Valuation&) = default;
    friend bool operator<(const Valuation& a, const Valuation& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }

private:
    Valuation(bool inf, long long v) : infinite_(inf), value_(v) {}
    bool infinite_;
    long long value_;
};

namespace detail {

// multiplicity of p in a nonzero integer
inline long long multiplicity(const Prime& p, Integer n) {
    long long k = 0;
    Integer pv(p.value());
    while (n % pv == 0) { n /= pv; ++k; }
    return k;
}

}  // namespace detail

inline Valuation ord(const Prime& p, const Rational& x) {
    if (x == 0) return Valuation::infinity();
    // x canonical: at most one of numerator/denominator is divisible by p
    long long k = detail::multiplicity(p, num(x));
    if (k == 0) k = -detail::multiplicity(p, den(x));
    return Valuation::of(k);
}

inline Rational padic_norm(const Prime& p, const Rational& x) {
    Valuation v = ord(p, x);
    if (v.is_infinity()) return Rational(0);
    return pow(Rational(p.value()), -v.finite_value());
}

inline Rational real_norm(const Rational& x) { return abs(x); }

inline Rational norm_at(const Place& place, const Rational& x) {
    return place.is_archimedean() ? real_norm(x) : padic_norm(place.prime(), x);
}

inline Integer digit_sum(const Prime& p, Integer n) {
    if (n < 0) throw std::invalid_argument("digit_sum: n must be nonnegative");
    Integer s = 0, pv(p.value());
    while (n > 0) {
        s += n % pv;
        n /= pv;
    }
    return s;
}

// Legendre's formula: ord_p(n!) = (n - s_p(n)) / (p - 1).
inline Integer factorial_valuation(const Prime& p, const Integer& n) {
    if (n < 0) throw std::invalid_argument("factorial_valuation: n must be nonnegative");
    Integer diff = n - digit_sum(p, n);
    if (diff % (Integer(p.value()) - 1) != 0)
        throw std::logic_error("factorial_valuation: (p-1) does not divide n - s_p(n)");
    return diff / (Integer(p.value()) - 1);
}

}  // namespace padiq
