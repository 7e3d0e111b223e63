#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "padiq/binomial.hpp"
#include "padiq/padic.hpp"
#include "padiq/prime.hpp"
#include "padiq/rational.hpp"
#include "padiq/series.hpp"
#include "padiq/valuation.hpp"

namespace padiq {

// Finite-support adele: a real component, finitely many explicit p-adic
// components, and a rational default occupying every unlisted prime. The
// default must be a p-adic integer at every unlisted prime, which is enforced
// by requiring each prime factor of its denominator to appear as an explicit
// key; "a_p in Z_p for all but finitely many p" then holds by construction.
class Adele {
public:
    using FiniteMap = std::map<Prime, PadicNumber>;

    Adele(Rational real, FiniteMap finite, Rational default_rational)
        : real_(std::move(real)),
          finite_(std::move(finite)),
          default_(std::move(default_rational)) {
        for (const auto& [p, x] : finite_)
            if (!(x.prime() == p))
                throw std::invalid_argument("Adele: component prime mismatch at key " +
                                            std::to_string(p.value()));
        Integer d = den(default_);
        for (const auto& [p, x] : finite_) {
            Integer pv(p.value());
            while (d % pv == 0) d /= pv;
        }
        if (d != 1)
            throw std::invalid_argument(
                "Adele: default denominator has a prime factor outside the explicit keys");
    }

    static Adele from_rational_default(const Rational& real, const Rational& def) {
        return Adele(real, {}, def);
    }

    const Rational& real_component() const { return real_; }
    const FiniteMap& finite_components() const { return finite_; }
    const Rational& default_rational() const { return default_; }

    // the component at p: explicit entry, or the default embedded at the
    // requested precision
    PadicNumber component(const Prime& p, long long precision = 16) const {
        auto it = finite_.find(p);
        if (it != finite_.end()) return it->second;
        return from_rational(p, default_, precision);
    }

private:
    Rational real_;
    FiniteMap finite_;
    Rational default_;
};

namespace detail {

// embed a rational at p with the window closed no earlier than `window`
inline PadicNumber embed_to_window(const Prime& p, const Rational& r, long long window) {
    if (r == 0) return PadicNumber::exact_zero(p);
    long long v = ord(p, r).finite_value();
    return from_rational(p, r, std::max<long long>(1, window - v));
}

}  // namespace detail

enum class AdeleOp { Add, Mul };

// Componentwise ring operation; the explicit key set of the result is the
// union of the inputs' keys, and the unlisted primes combine exactly as
// rationals.
inline Adele adele_ring_op(AdeleOp op, const Adele& a, const Adele& b) {
    Rational real = op == AdeleOp::Add ? Rational(a.real_component() + b.real_component())
                                       : Rational(a.real_component() * b.real_component());
    Rational def = op == AdeleOp::Add ? Rational(a.default_rational() + b.default_rational())
                                      : Rational(a.default_rational() * b.default_rational());
    Adele::FiniteMap out;
    auto combine = [op](const PadicNumber& x, const PadicNumber& y) {
        return op == AdeleOp::Add ? x + y : x * y;
    };
    for (const auto& [p, x] : a.finite_components()) {
        auto it = b.finite_components().find(p);
        if (it != b.finite_components().end()) {
            out.emplace(p, combine(x, it->second));
        } else {
            long long w = x.is_exact_zero() ? 16 : x.window();
            out.emplace(p, combine(x, detail::embed_to_window(p, b.default_rational(), w)));
        }
    }
    for (const auto& [p, y] : b.finite_components()) {
        if (a.finite_components().count(p)) continue;
        long long w = y.is_exact_zero() ? 16 : y.window();
        out.emplace(p, combine(detail::embed_to_window(p, a.default_rational(), w), y));
    }
    return Adele(real, std::move(out), def);
}

struct IdeleReport {
    bool is_idele;
    std::vector<std::pair<std::string, std::string>> violations;  // (place, reason)
};

// An adele is an idele when every component is (provably) nonzero; explicit
// components of norm != 1 are the permitted finite exceptions.
inline IdeleReport is_idele(const Adele& a) {
    IdeleReport rep{true, {}};
    auto flag = [&rep](const std::string& place, const std::string& why) {
        rep.is_idele = false;
        rep.violations.emplace_back(place, why);
    };
    if (a.real_component() == 0) flag("inf", "real component is zero");
    for (const auto& [p, x] : a.finite_components()) {
        if (x.is_exact_zero())
            flag(std::to_string(p.value()), "component is zero");
        else if (x.is_zero_sentinel())
            flag(std::to_string(p.value()), "component is zero to working precision");
    }
    if (a.default_rational() == 0) flag("default", "default rational is zero");
    return rep;
}

// Componentwise application of a power series. Each explicit finite component
// must lie inside the family's exact radius; the default must be 0 (no other
// rational has |x|_p < 1 at every unlisted prime), and the series must be
// proven convergent at the real component.
inline Adele apply_series(const PowerSeries& f, const Adele& a, long long precision,
                          const Rational& real_tol = kDefaultTolerance) {
    if (precision < 1) throw std::invalid_argument("apply_series: precision must be >= 1");
    if (a.default_rational() != 0)
        throw not_convergent(
            "apply_series: nonzero default cannot satisfy |x|_p < 1 at every unlisted prime");
    Rational real;
    try {
        real = evaluate_real(f, a.real_component(), real_tol);
    } catch (const not_convergent& e) {
        throw not_convergent(std::string("place inf: ") + e.what());
    }
    Adele::FiniteMap out;
    for (const auto& [p, x] : a.finite_components()) {
        try {
            // the result window cannot exceed what the input component carries
            long long k = x.is_exact_zero()
                              ? precision
                              : std::max<long long>(1, std::min(precision, x.window()));
            out.emplace(p, evaluate_padic_at(f, x, k));
        } catch (const not_convergent& e) {
            throw not_convergent("place " + std::to_string(p.value()) + ": " + e.what());
        }
    }
    return Adele(real, std::move(out), f.coeff(0));
}

inline bool is_nonpos_integer(const Rational& x) { return den(x) == 1 && num(x) <= 0; }

// F(a,b;c;x) with coefficients (a)_n (b)_n / ((c)_n n!). When b = c the
// Pochhammer factors cancel and the series is exactly the binomial series of
// (1+x)^a, returned with that family's radius and tail certificates.
inline PowerSeries hypergeometric(const Rational& a, const Rational& b, const Rational& c) {
    if (is_nonpos_integer(c))
        throw std::domain_error("hypergeometric: c must not be a nonpositive integer");
    if (b == c) return binomial_series(a);
    auto coeff = [a, b, c](long long n) {
        Rational r = 1;
        for (long long i = 0; i < n; ++i) r *= (a + i) * (b + i) / ((c + i) * (i + 1));
        return r;
    };
    return PowerSeries(coeff, "hypergeometric(" + to_string(a) + "," + to_string(b) + "," +
                                  to_string(c) + ")");
}

// Evaluates (1 + x_v)^a componentwise through the binomial series and checks
// |result|_p = 1 at each explicit finite place; by the sharp ultrametric
// |1 + x_p|_p = max(1, |x_p|_p) = 1 whenever |x_p|_p < 1 and |a|_p = 1.
inline IdeleReport idele_check_thm412(const Rational& a_exp, const Adele& x,
                                      long long precision) {
    IdeleReport rep{true, {}};
    auto flag = [&rep](const std::string& place, const std::string& why) {
        rep.is_idele = false;
        rep.violations.emplace_back(place, why);
    };
    PowerSeries f = binomial_series(a_exp);
    if (x.default_rational() != 0)
        flag("default", "default must be 0 so unlisted components have |x|_p < 1");
    if (real_norm(x.real_component()) >= 1) {
        flag("inf", "|x|_oo < 1 required");
    } else if (evaluate_real(f, x.real_component()) == 0) {
        flag("inf", "(1+x)^a vanishes at the real place");
    }
    for (const auto& [p, xp] : x.finite_components()) {
        std::string ps = std::to_string(p.value());
        // polynomial exponents need no root choice, so no unit condition on a
        if (!is_nonneg_integer(a_exp) && padic_norm(p, a_exp) != 1) {
            flag(ps, "|a|_p = 1 required at each tested finite place");
            continue;
        }
        bool small = xp.is_exact_zero() || (xp.is_regular() ? xp.valuation() >= 1 : xp.window() >= 1);
        if (!small) {
            flag(ps, "|x_p|_p < 1 required");
            continue;
        }
        try {
            // the result window cannot exceed what the input component carries
            long long k = xp.is_exact_zero()
                              ? precision
                              : std::max<long long>(1, std::min(precision, xp.window()));
            PadicNumber y = evaluate_padic_at(f, xp, k);
            if (!y.is_regular() || y.norm() != 1)
                flag(ps, "|(1+x_p)^a|_p = 1 failed");
        } catch (const std::exception& e) {
            flag(ps, std::string("evaluation failed: ") + e.what());
        }
    }
    return rep;
}

// `{inf: <rational>, <p1>: <digit-string>, ..., default: <rational>}`
inline std::string to_string(const Adele& a) {
    std::ostringstream out;
    out << "{inf: " << to_string(a.real_component());
    for (const auto& [p, x] : a.finite_components())
        out << ", " << p.value() << ": " << to_string(x);
    out << ", default: " << to_string(a.default_rational()) << "}";
    return out.str();
}

inline Adele parse_adele(const std::string& text) {
    std::string s = text;
    auto lb = s.find('{'), rb = s.rfind('}');
    if (lb == std::string::npos || rb == std::string::npos || rb <= lb)
        throw std::invalid_argument("parse_adele: expected { ... }");
    s = s.substr(lb + 1, rb - lb - 1);
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        if (comma == std::string::npos) {
            items.push_back(s.substr(start));
            break;
        }
        items.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    auto trim = [](std::string t) {
        auto b = t.find_first_not_of(" \t\n");
        auto e = t.find_last_not_of(" \t\n");
        return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    bool have_real = false, have_default = false;
    Rational real, def;
    Adele::FiniteMap fin;
    for (const auto& raw : items) {
        std::string item = trim(raw);
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("parse_adele: entry without ':' separator");
        std::string key = trim(item.substr(0, colon));
        std::string value = trim(item.substr(colon + 1));
        if (key == "inf") {
            real = parse_rational(value);
            have_real = true;
        } else if (key == "default") {
            def = parse_rational(value);
            have_default = true;
        } else {
            Prime p(std::stoull(key));
            if (value == "0")
                fin.emplace(p, PadicNumber::exact_zero(p));
            else
                fin.emplace(p, parse_padic(value));
        }
    }
    if (!have_real || !have_default)
        throw std::invalid_argument("parse_adele: 'inf' and 'default' entries are required");
    return Adele(real, std::move(fin), def);
}

}  // namespace padiq
