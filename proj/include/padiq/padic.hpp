#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "padiq/prime.hpp"
#include "padiq/rational.hpp"
#include "padiq/valuation.hpp"

namespace padiq {

struct precision_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Integer egcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
    if (b == 0) { x = 1; y = 0; return a; }
    Integer x1, y1;
    Integer g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline Integer invmod(const Integer& a, const Integer& m) {
    Integer x, y;
    Integer g = egcd(((a % m) + m) % m, m, x, y);
    if (g != 1) throw std::domain_error("invmod: not invertible");
    return ((x % m) + m) % m;
}

}  // namespace detail

// Truncated element of Q_p: p^valuation * unit + O(p^(valuation+precision)).
// A zero-at-precision value records only the bound ord >= valuation+precision
// (unit = 0); exact zero arises only from embedding the rational 0.
class PadicNumber {
public:
    enum class Kind { Regular, ZeroAtPrecision, ExactZero };

    static PadicNumber exact_zero(Prime p) { return PadicNumber(p, Kind::ExactZero, 0, 0, 0); }

    static PadicNumber zero_at(Prime p, long long bound) {
        return PadicNumber(p, Kind::ZeroAtPrecision, bound, 0, 0);
    }

    static PadicNumber make(Prime p, long long valuation, Integer unit, long long precision) {
        if (precision < 1) throw std::invalid_argument("PadicNumber: precision must be >= 1");
        Integer mod = pow(Integer(p.value()), static_cast<unsigned long>(precision));
        unit = ((unit % mod) + mod) % mod;
        if (unit == 0) return zero_at(p, valuation + precision);
        if (unit % p.value() == 0)
            throw std::invalid_argument("PadicNumber: unit must be coprime to p");
        return PadicNumber(p, Kind::Regular, valuation, unit, precision);
    }

    const Prime& prime() const { return p_; }
    Kind kind() const { return kind_; }
    bool is_exact_zero() const { return kind_ == Kind::ExactZero; }
    bool is_zero_sentinel() const { return kind_ == Kind::ZeroAtPrecision; }
    bool is_regular() const { return kind_ == Kind::Regular; }

    long long valuation() const {
        if (!is_regular()) throw std::logic_error("PadicNumber: zero has no finite valuation");
        return val_;
    }
    const Integer& unit() const { return unit_; }
    long long precision() const { return prec_; }

    // exponent of the O(p^N) window; everything below it is determined
    long long window() const {
        if (is_exact_zero()) throw std::logic_error("PadicNumber: exact zero has no window");
        return is_regular() ? val_ + prec_ : val_;
    }

    Rational norm() const {
        if (is_exact_zero()) return Rational(0);
        if (is_zero_sentinel())
            throw std::logic_error("PadicNumber: norm of zero-at-precision is only bounded");
        return pow(Rational(p_.value()), -val_);
    }

    // base-p digit at position i, for determined positions only
    Integer digit(long long i) const {
        if (is_exact_zero()) return 0;
        if (i >= window()) throw std::logic_error("PadicNumber: digit beyond precision window");
        if (is_zero_sentinel() || i < val_) return 0;
        return (unit_ / pow(Integer(p_.value()), static_cast<unsigned long>(i - val_))) % p_.value();
    }

    PadicNumber truncated(long long k) const {
        if (!is_regular()) return *this;
        if (k >= prec_) return *this;
        if (k < 1) throw std::invalid_argument("PadicNumber: truncation to empty window");
        return make(p_, val_, unit_ % pow(Integer(p_.value()), static_cast<unsigned long>(k)), k);
    }

    friend bool operator==(const PadicNumber& a, const PadicNumber& b) {
        return a.p_ == b.p_ && a.kind_ == b.kind_ && a.val_ == b.val_ && a.unit_ == b.unit_ &&
               a.prec_ == b.prec_;
    }

private:
    PadicNumber(Prime p, Kind k, long long v, Integer u, long long prec)
        : p_(p), kind_(k), val_(v), unit_(std::move(u)), prec_(prec) {}

    Prime p_;
    Kind kind_;
    long long val_;
    Integer unit_;
    long long prec_;
};

inline PadicNumber from_rational(const Prime& p, const Rational& x, long long precision) {
    if (precision < 1) throw std::invalid_argument("from_rational: precision must be >= 1");
    if (x == 0) return PadicNumber::exact_zero(p);
    long long v = ord(p, x).finite_value();
    Rational y = x / pow(Rational(p.value()), v);  // now a p-adic unit
    Integer mod = pow(Integer(p.value()), static_cast<unsigned long>(precision));
    Integer u = num(y) % mod * detail::invmod(den(y), mod) % mod;
    return PadicNumber::make(p, v, u, precision);
}

namespace detail {

inline void require_same_prime(const PadicNumber& a, const PadicNumber& b) {
    if (!(a.prime() == b.prime()))
        throw std::invalid_argument("PadicNumber: mixed primes in arithmetic");
}

inline PadicNumber add_sub(const PadicNumber& a, const PadicNumber& b, bool subtract) {
    require_same_prime(a, b);
    const Prime& p = a.prime();
    if (a.is_exact_zero()) {
        if (!subtract || b.is_exact_zero()) return b;
        if (b.is_zero_sentinel()) return b;
        return PadicNumber::make(p, b.valuation(), -b.unit(), b.precision());
    }
    if (b.is_exact_zero()) return a;
    long long N = std::min(a.window(), b.window());
    if (a.is_zero_sentinel() && b.is_zero_sentinel()) return PadicNumber::zero_at(p, N);
    if (a.is_zero_sentinel() || b.is_zero_sentinel()) {
        const PadicNumber& r = a.is_zero_sentinel() ? b : a;
        if (N <= r.valuation())
            throw precision_exhausted("add/sub: no significant digits remain");
        PadicNumber t = r.truncated(N - r.valuation());
        if (subtract && a.is_zero_sentinel())
            return PadicNumber::make(p, t.valuation(), -t.unit(), t.precision());
        return t;
    }
    long long v0 = std::min(a.valuation(), b.valuation());
    Integer pv(p.value());
    Integer A = a.unit() * pow(pv, static_cast<unsigned long>(a.valuation() - v0));
    Integer B = b.unit() * pow(pv, static_cast<unsigned long>(b.valuation() - v0));
    Integer mod = pow(pv, static_cast<unsigned long>(N - v0));
    Integer S = subtract ? Integer(A - B) : Integer(A + B);
    S = ((S % mod) + mod) % mod;
    if (S == 0) return PadicNumber::zero_at(p, N);
    long long v = v0 + multiplicity(p, S);
    Integer u = S / pow(pv, static_cast<unsigned long>(v - v0));
    return PadicNumber::make(p, v, u, N - v);
}

}  // namespace detail

inline PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    return detail::add_sub(a, b, false);
}

inline PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) {
    return detail::add_sub(a, b, true);
}

inline PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    detail::require_same_prime(a, b);
    const Prime& p = a.prime();
    if (a.is_exact_zero() || b.is_exact_zero()) return PadicNumber::exact_zero(p);
    if (a.is_zero_sentinel() || b.is_zero_sentinel()) {
        long long bound = 0;
        bound += a.is_zero_sentinel() ? a.window() : a.valuation();
        bound += b.is_zero_sentinel() ? b.window() : b.valuation();
        return PadicNumber::zero_at(p, bound);
    }
    long long k = std::min(a.precision(), b.precision());
    return PadicNumber::make(p, a.valuation() + b.valuation(), a.unit() * b.unit(), k);
}

inline PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
    detail::require_same_prime(a, b);
    if (b.is_exact_zero()) throw std::domain_error("PadicNumber: division by zero");
    if (b.is_zero_sentinel())
        throw std::domain_error("PadicNumber: division by zero-at-precision value");
    const Prime& p = a.prime();
    if (a.is_exact_zero()) return a;
    if (a.is_zero_sentinel()) return PadicNumber::zero_at(p, a.window() - b.valuation());
    long long k = std::min(a.precision(), b.precision());
    Integer mod = pow(Integer(p.value()), static_cast<unsigned long>(k));
    Integer u = a.unit() % mod * detail::invmod(b.unit(), mod) % mod;
    return PadicNumber::make(p, a.valuation() - b.valuation(), u, k);
}

inline PadicNumber pow(const PadicNumber& a, long long e) {
    if (e < 0) {
        PadicNumber one = from_rational(a.prime(), 1, a.is_regular() ? a.precision() : 1);
        return pow(one / a, -e);
    }
    PadicNumber r = from_rational(a.prime(), 1, a.is_regular() ? a.precision() : 1);
    PadicNumber base = a;
    while (e) {
        if (e & 1) r = r * base;
        if ((e >>= 1)) base = base * base;
    }
    return r;
}

// True when the two values agree on every digit of their common window.
inline bool agree(const PadicNumber& a, const PadicNumber& b) {
    if (!(a.prime() == b.prime())) return false;
    if (a.is_exact_zero() && b.is_exact_zero()) return true;
    if (a.is_exact_zero() || b.is_exact_zero()) {
        const PadicNumber& r = a.is_exact_zero() ? b : a;
        return !r.is_regular();  // regular values are provably nonzero
    }
    long long N = std::min(a.window(), b.window());
    long long lo = std::min(a.is_regular() ? a.valuation() : N,
                            b.is_regular() ? b.valuation() : N);
    for (long long i = lo; i < N; ++i)
        if (a.digit(i) != b.digit(i)) return false;
    return true;
}

// Textual rendering: "...d_{N-1} ... d_1 d_0 . d_{-1} ... (base p) + O(p^N)".
// Digits are decimal numbers separated by single spaces, most significant
// first; "." marks the p^0 boundary; N = valuation + precision.
inline std::string to_string(const PadicNumber& x) {
    if (x.is_exact_zero()) return "0";
    std::ostringstream out;
    out << "...";
    long long N = x.window();
    long long lo = std::min<long long>(0, x.is_regular() ? x.valuation() : N);
    for (long long i = N - 1; i >= 0; --i) out << x.digit(i).str() << " ";
    if (N <= 0) out << " ";  // keep "..." and "." as separate tokens
    out << ".";
    for (long long i = std::min<long long>(-1, N - 1); i >= lo; --i) out << " " << x.digit(i).str();
    out << " (base " << x.prime().value() << ") + O(" << x.prime().value() << "^" << N << ")";
    return out.str();
}

inline PadicNumber parse_padic(const std::string& text) {
    if (text == "0") throw std::invalid_argument("parse_padic: exact zero has no prime; parse in context");
    std::istringstream in(text);
    std::string tok;
    std::vector<Integer> int_digits, frac_digits;
    if (!(in >> tok) || tok.substr(0, 3) != "...")
        throw std::invalid_argument("parse_padic: expected leading '...'");
    if (tok.size() > 3) int_digits.emplace_back(tok.substr(3));
    while (in >> tok && tok != ".") int_digits.emplace_back(tok);
    if (tok != ".") throw std::invalid_argument("parse_padic: missing '.'");
    while (in >> tok && tok != "(base") frac_digits.emplace_back(tok);
    if (tok != "(base") throw std::invalid_argument("parse_padic: missing '(base'");
    std::string ptok, plus, oterm;
    if (!(in >> ptok >> plus >> oterm) || plus != "+")
        throw std::invalid_argument("parse_padic: malformed trailer");
    if (ptok.empty() || ptok.back() != ')')
        throw std::invalid_argument("parse_padic: malformed base");
    Prime p(std::stoull(ptok.substr(0, ptok.size() - 1)));
    auto caret = oterm.find('^');
    if (oterm.substr(0, 2) != "O(" || caret == std::string::npos || oterm.back() != ')')
        throw std::invalid_argument("parse_padic: malformed O() term");
    long long N = std::stoll(oterm.substr(caret + 1, oterm.size() - caret - 2));
    // digits: positions N-1..0 then -1..lo
    std::vector<std::pair<long long, Integer>> digits;
    for (std::size_t i = 0; i < int_digits.size(); ++i)
        digits.emplace_back(static_cast<long long>(int_digits.size() - 1 - i), int_digits[i]);
    long long fstart = std::min<long long>(-1, N - 1);
    for (std::size_t i = 0; i < frac_digits.size(); ++i)
        digits.emplace_back(fstart - static_cast<long long>(i), frac_digits[i]);
    Integer value = 0;
    long long lo = digits.empty() ? N : digits.back().first;
    for (auto& [pos, d] : digits) {
        if (d < 0 || d >= p.value()) throw std::invalid_argument("parse_padic: digit out of range");
        value += d * pow(Integer(p.value()), static_cast<unsigned long>(pos - lo));
    }
    if (value == 0) return PadicNumber::zero_at(p, N);
    long long v = lo + detail::multiplicity(p, value);
    Integer u = value / pow(Integer(p.value()), static_cast<unsigned long>(v - lo));
    return PadicNumber::make(p, v, u, N - v);
}

}  // namespace padiq
