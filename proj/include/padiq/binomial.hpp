#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "padiq/hensel.hpp"
#include "padiq/padic.hpp"
#include "padiq/prime.hpp"
#include "padiq/rational.hpp"
#include "padiq/series.hpp"
#include "padiq/valuation.hpp"

namespace padiq {

// binom(b, n) = b(b-1)...(b-n+1) / n!
inline Rational gen_binom(const Rational& b, long long n) {
    if (n < 0) throw std::invalid_argument("gen_binom: n must be >= 0");
    Rational c = 1;
    for (long long i = 0; i < n; ++i) c *= (b - i) / (i + 1);
    return c;
}

inline bool is_nonneg_integer(const Rational& b) { return den(b) == 1 && num(b) >= 0; }

// Exact radius of B(b,p,X) per regime: polynomial for b in Z>=0; at a finite
// place p^(-1/(p-1))/|b|_p when |b|_p > 1, else 1; over R, 1.
inline RadiusEstimate binomial_radius(const Rational& b, const Place& place) {
    Extended value;
    if (is_nonneg_integer(b)) {
        value = place.is_finite() ? Extended::minus_inf() : Extended::plus_inf();
    } else if (place.is_archimedean()) {
        value = Extended::finite(Rational(1));
    } else {
        long long ord_b = ord(place.prime(), b).is_infinity()
                              ? 0
                              : ord(place.prime(), b).finite_value();
        if (ord_b < 0)
            value = Extended::finite(Rational(1, place.prime().value() - 1) - ord_b);
        else
            value = Extended::finite(Rational(0));
    }
    return {place, RadiusEstimate::Exact, RadiusEstimate::FamilyFormula, value};
}

inline PowerSeries binomial_series(const Rational& b) {
    auto radius = [b](const Place& place) -> std::optional<RadiusEstimate> {
        return binomial_radius(b, place);
    };
    auto tail = [b](const Prime& p, long long ord_x, long long k) -> std::optional<long long> {
        if (is_nonneg_integer(b)) return static_cast<long long>(num(b)) + 1;
        long long ord_b = ord(p, b).finite_value();
        if (ord_b >= 0) {
            // coefficients in Z_p (Lemma: binom(b,n) is p-integral)
            if (ord_x < 1) return std::nullopt;
            return (k + ord_x - 1) / ord_x;
        }
        // ord(binom(b,n)) >= n*ord_b - ord(n!) > n*(ord_b - 1/(p-1))
        Rational margin = Rational(ord_x + ord_b) - Rational(1, p.value() - 1);
        if (margin <= 0) return std::nullopt;
        Integer M = ceil_rational(Rational(k) / margin);
        return std::max<long long>(0, static_cast<long long>(M));
    };
    return PowerSeries([b](long long n) { return gen_binom(b, n); },
                       "binomial(" + to_string(b) + ")", radius, tail);
}

struct ZpCheck {
    bool in_Zp;
    std::optional<long long> first_violation;
};

// Checks |binom(b,n)|_p <= 1 for n <= depth; reports the first violating n.
inline ZpCheck binom_in_Zp(const Rational& b, const Prime& p, long long depth) {
    Rational c = 1;
    for (long long n = 1; n <= depth; ++n) {
        c *= (b - (n - 1)) / n;
        if (padic_norm(p, c) > 1) return {false, n};
    }
    return {true, std::nullopt};
}

struct RationalPoint {
    long long u;
    long long v;
    Rational value() const { return Rational(u, v); }
};

// All u/v in lowest terms with |v| <= height, |u| < |v|, p | u, p not | v:
// exactly the rationals with both |x|_oo < 1 and |x|_p < 1 at bounded height.
inline std::vector<RationalPoint> rational_points(const Prime& p, long long height) {
    if (height < 1) throw std::invalid_argument("rational_points: height must be >= 1");
    std::vector<RationalPoint> pts;
    for (long long v = 1; v <= height; ++v) {
        if (v % static_cast<long long>(p.value()) == 0) continue;
        for (long long u = -(v - 1); u <= v - 1; ++u) {
            if (u % static_cast<long long>(p.value()) != 0) continue;
            if (std::gcd(std::abs(u), v) != 1) continue;
            pts.push_back({u, v});
        }
    }
    std::sort(pts.begin(), pts.end(),
              [](const RationalPoint& a, const RationalPoint& b) { return a.value() < b.value(); });
    return pts;
}

// The congruence u^N = v^N (mod p) and the norm condition |(u/v)^N - 1|_p < 1;
// the two are equivalent whenever the preconditions hold.
inline std::pair<bool, bool> lemma46_check(long long u, long long v, long long N,
                                           const Prime& p) {
    if (v == 0 || std::gcd(std::abs(u), std::abs(v)) != 1)
        throw std::invalid_argument("lemma46_check: u, v must be coprime with v nonzero");
    if (v % static_cast<long long>(p.value()) == 0)
        throw std::invalid_argument("lemma46_check: p must not divide v");
    if (N < 1) throw std::invalid_argument("lemma46_check: N must be positive");
    auto residue = [&](long long a) {
        long long m = static_cast<long long>(p.value());
        return detail::powmod(static_cast<std::uint64_t>(((a % m) + m) % m),
                              static_cast<std::uint64_t>(N), p.value());
    };
    bool congruence = residue(u) == residue(v);
    bool norm_condition = padic_norm(p, pow(make_rational(u, v), N) - 1) < 1;
    return {congruence, norm_condition};
}

struct RationalSumReport {
    PadicNumber series_value;
    PadicNumber hensel_value;
    bool oracle_agrees;
    bool equals_uv;
    bool equals_minus_uv;
    bool equals_uv_pow;
    std::string relation;  // "u/v", "-u/v", or "other (root-of-unity case)"
    bool has_real_branch;
    Rational real_value;
    bool real_equals_uv;
    bool real_equals_minus_uv;
};

// Verifies the rational-sum theorem at desk scale: evaluates B(1/N, p, .) at
// X = (u/v)^N - 1 p-adically, cross-checks against the Hensel root of
// Y^|N| = (u/v)^|N| in the disc |y-1|_p < 1, and reports the relation of the
// sum to +-u/v and to (u/v)^N.
inline RationalSumReport rational_sum_verify(long long N, long long u, long long v,
                                             const Prime& p, long long precision,
                                             const Rational& real_tol = Rational(1, 1000000)) {
    if (N == 0) throw std::invalid_argument("rational_sum_verify: N must be nonzero");
    if (N % static_cast<long long>(p.value()) == 0)
        throw std::invalid_argument("rational_sum_verify: p must not divide N");
    if (v == 0 || std::gcd(std::abs(u), std::abs(v)) != 1)
        throw std::invalid_argument("rational_sum_verify: u, v must be coprime, v nonzero");
    if (v % static_cast<long long>(p.value()) == 0)
        throw std::invalid_argument("rational_sum_verify: p must not divide v");
    auto [congruence, norm_cond] = lemma46_check(u, v, std::abs(N), p);
    if (!congruence)
        throw std::invalid_argument("rational_sum_verify: u^N = v^N (mod p) must hold");

    Rational uv = make_rational(u, v);
    Rational X = pow(uv, N) - 1;
    PowerSeries f = binomial_series(Rational(1, N));
    PadicNumber series_value = evaluate_padic(f, X, p, precision);
    PadicNumber hensel_value =
        hensel_root({p, std::abs(N), pow(uv, std::abs(N))}, precision);

    bool eq_uv = agree(series_value, from_rational(p, uv, precision));
    bool eq_minus = agree(series_value, from_rational(p, -uv, precision));
    bool eq_pow = agree(series_value, from_rational(p, pow(uv, N), precision));

    RationalSumReport rep{series_value,
                          hensel_value,
                          agree(series_value, hensel_value),
                          eq_uv,
                          eq_minus,
                          eq_pow,
                          eq_uv ? "u/v" : (eq_minus ? "-u/v" : "other (root-of-unity case)"),
                          false,
                          Rational(0),
                          false,
                          false};
    if (real_norm(X) < 1) {
        rep.has_real_branch = true;
        rep.real_value = evaluate_real(f, X, real_tol, 4096);
        rep.real_equals_uv = abs(rep.real_value - uv) < real_tol;
        rep.real_equals_minus_uv = abs(rep.real_value + uv) < real_tol;
    }
    return rep;
}

struct PlaceSumReport {
    Place place;
    std::string value;  // p-adic digit string, or exact rational partial sum
    bool hensel_checked;
    bool hensel_consistent;
    bool gate_plus;   // |c - 1|_v < 1
    bool gate_minus;  // |-c - 1|_v < 1
    std::string certified;  // "c", "-c", or the ambiguity notice
    std::string note;
};

// Evaluates F_v(x) = sum binom(r/s, n) x^n at each listed place and applies
// the root-of-unity gate |+-c - 1|_v < 1 before certifying F_v(x) = +-c.
inline std::vector<PlaceSumReport> multi_place_sum(long long r, long long s, const Rational& x,
                                                   std::vector<Place> places, const Rational& c,
                                                   long long precision = 32,
                                                   const Rational& real_tol = kDefaultTolerance) {
    if (s < 1) throw std::invalid_argument("multi_place_sum: s must be positive");
    Rational b(r, s);
    long long rr = static_cast<long long>(num(b));
    long long ss = static_cast<long long>(den(b));
    PowerSeries f = binomial_series(b);
    std::sort(places.begin(), places.end());
    std::vector<PlaceSumReport> out;
    for (const Place& place : places) {
        PlaceSumReport rep{place, "", false, false, false, false, "", ""};
        try {
            if (norm_at(place, x) >= 1)
                throw std::invalid_argument("|x|_v < 1 required at every listed place");
            rep.gate_plus = norm_at(place, c - 1) < 1;
            rep.gate_minus = norm_at(place, -c - 1) < 1;
            if (place.is_finite()) {
                const Prime& p = place.prime();
                if (padic_norm(p, b) > 1)
                    throw std::invalid_argument("|b|_v <= 1 required at every finite place");
                PadicNumber val = evaluate_padic(f, x, p, precision);
                rep.value = to_string(val);
                try {
                    PadicNumber y = hensel_root({p, ss, pow(1 + x, rr)}, precision);
                    rep.hensel_checked = true;
                    rep.hensel_consistent = agree(val, y);
                } catch (const std::exception& e) {
                    rep.note = std::string("hensel oracle unavailable: ") + e.what();
                }
                if (rep.gate_plus && agree(val, from_rational(p, c, precision)))
                    rep.certified = "c";
                else if (rep.gate_minus && agree(val, from_rational(p, -c, precision)))
                    rep.certified = "-c";
                else if (!rep.gate_plus && !rep.gate_minus)
                    rep.certified = "root-of-unity ambiguity, value not certified equal to c";
                else
                    rep.certified = "gate passed but value differs from +-c";
            } else {
                Rational val = evaluate_real(f, x, real_tol);
                rep.value = to_string(val);
                if (rep.gate_plus && abs(val - c) < real_tol)
                    rep.certified = "c";
                else if (rep.gate_minus && abs(val + c) < real_tol)
                    rep.certified = "-c";
                else if (!rep.gate_plus && !rep.gate_minus)
                    rep.certified = "root-of-unity ambiguity, value not certified equal to c";
                else
                    rep.certified = "gate passed but value differs from +-c";
            }
        } catch (const std::exception& e) {
            rep.note = e.what();
            rep.certified = "precondition violated";
        }
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace padiq
