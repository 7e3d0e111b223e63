#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "padiq/prime.hpp"
#include "padiq/rational.hpp"
#include "padiq/series.hpp"
#include "padiq/valuation.hpp"

namespace padiq {

// Rising factorial a(a+1)...(a+m-1); empty product = 1.
struct Pochhammer {
    Rational base;
    long long length;

    Rational value() const {
        if (length < 0) throw std::invalid_argument("Pochhammer: negative length");
        Rational r = 1;
        for (long long i = 0; i < length; ++i) r *= base + i;
        return r;
    }
};

inline Rational pochhammer(const Rational& a, long long m) { return Pochhammer{a, m}.value(); }

// Parameters of the everywhere-convergent series
//   sum_n eps^n (m!)^(m-1)/(q + (m!)^(E(n)*m)) x^m,   m = gamma*n + delta,
// with E(n) either a constant multiplier N >= 2 or a polynomial P_k(n).
class PhiSpec {
public:
    static PhiSpec with_multiplier(long long gamma, long long delta, int epsilon,
                                   const Rational& q, long long multiplier) {
        PhiSpec s(gamma, delta, epsilon, q);
        if (multiplier < 2)
            throw std::invalid_argument("PhiSpec: constant multiplier must be >= 2");
        s.multiplier_ = multiplier;
        return s;
    }

    // poly holds ascending coefficients of P_k; degree >= 1, positive leading
    // coefficient, and P_k(n) >= 2 on the checked range.
    static PhiSpec with_polynomial(long long gamma, long long delta, int epsilon,
                                   const Rational& q, std::vector<long long> poly) {
        PhiSpec s(gamma, delta, epsilon, q);
        while (!poly.empty() && poly.back() == 0) poly.pop_back();
        if (poly.size() < 2) throw std::invalid_argument("PhiSpec: P_k must have degree >= 1");
        if (poly.back() <= 0)
            throw std::invalid_argument("PhiSpec: P_k needs a positive leading coefficient");
        auto eval = [&poly](long long n) {
            Integer v = 0;
            for (std::size_t i = poly.size(); i-- > 0;) v = v * n + poly[i];
            return v;
        };
        for (long long n = 0; n <= 4096; ++n)
            if (eval(n) < 2) throw std::invalid_argument("PhiSpec: P_k(n) >= 2 violated");
        for (long long n = 2048; n < 4096; ++n)
            if (eval(n + 1) < eval(n))
                throw std::invalid_argument("PhiSpec: P_k must be nondecreasing at scale");
        s.poly_ = std::move(poly);
        return s;
    }

    long long gamma() const { return gamma_; }
    long long delta() const { return delta_; }
    int epsilon() const { return epsilon_; }
    const Rational& q() const { return q_; }
    bool has_constant_multiplier() const { return poly_.empty(); }
    long long constant_multiplier() const {
        if (!has_constant_multiplier())
            throw std::logic_error("PhiSpec: polynomial rule has no constant multiplier");
        return multiplier_;
    }

    // E(n): the factor multiplying (gamma n + delta) in the denominator exponent
    long long exponent_multiplier(long long n) const {
        if (poly_.empty()) return multiplier_;
        Integer v = 0;
        for (std::size_t i = poly_.size(); i-- > 0;) v = v * n + poly_[i];
        return static_cast<long long>(v);
    }

    std::string str() const {
        std::ostringstream out;
        out << "phi(gamma=" << gamma_ << ",delta=" << delta_ << ",eps=" << epsilon_
            << ",q=" << to_string(q_) << ",";
        if (poly_.empty()) {
            out << "N=" << multiplier_ << ")";
        } else {
            out << "P=[";
            for (std::size_t i = 0; i < poly_.size(); ++i) out << (i ? "," : "") << poly_[i];
            out << "])";
        }
        return out.str();
    }

private:
    PhiSpec(long long gamma, long long delta, int epsilon, const Rational& q)
        : gamma_(gamma), delta_(delta), epsilon_(epsilon), q_(q) {
        if (gamma < 1) throw std::invalid_argument("PhiSpec: gamma must be >= 1");
        if (delta < 0) throw std::invalid_argument("PhiSpec: delta must be >= 0");
        if (epsilon != 1 && epsilon != -1)
            throw std::invalid_argument("PhiSpec: epsilon must be +-1");
        if (q <= 0) throw std::invalid_argument("PhiSpec: q must be positive");
    }

    long long gamma_, delta_;
    int epsilon_;
    Rational q_;
    long long multiplier_ = 2;
    std::vector<long long> poly_;
};

// The nonzero coefficient of x^(gamma n + delta) and its exponent.
inline std::pair<long long, Rational> phi_coefficient(const PhiSpec& spec, long long n) {
    if (n < 0) throw std::invalid_argument("phi_coefficient: n must be >= 0");
    long long m = spec.gamma() * n + spec.delta();
    Rational mf(factorial(static_cast<unsigned long>(m)));
    Rational coeff = pow(mf, m - 1) / (spec.q() + pow(mf, spec.exponent_multiplier(n) * m));
    if (spec.epsilon() == -1 && (n & 1)) coeff = -coeff;
    return {m, coeff};
}

namespace detail {

// Certified tail index: smallest power M such that every term with exponent
// >= M has ord_p >= k, for arguments with ord_p(x) >= ord_x. Derived from
// Legendre's formula: term ord at exponent m is
//   (m-1)*ord_p(m!) - ord_p(q + (m!)^(E m)) + m*ord_x,
// which equals (m-1)*ord_p(m!) - ord_p(q) + m*ord_x exactly once
// E*m*ord_p(m!) > ord_p(q), and grows quadratically in m.
inline std::optional<long long> phi_tail_start(const PhiSpec& spec, const Prime& p,
                                               long long ord_x, long long k) {
    long long pv = static_cast<long long>(p.value());
    long long ordq = ord(p, spec.q()).finite_value();
    long long m1 = std::max<long long>(pv, ordq / 2 + 2);
    // all m >= m0 satisfy m >= 2(p-1)(bitlen(m)+1), hence ord_p(m!) >= m/(2(p-1))
    int bstar = 1;
    while (!((1LL << (bstar - 1)) >= 2 * (pv - 1) * (bstar + 1))) ++bstar;
    long long m0 = 1LL << (bstar - 1);
    long long mq = ord_x >= 0 ? 1 : (pv - 1) * (-ord_x) + 1;
    long long mstar = std::max({m0, m1, mq, spec.delta()});
    const long long cap = 1LL << 22;
    auto lower_bound_ord = [&](long long m) {
        return Rational(m) * (m - 1) / (2 * (pv - 1)) + Rational(m) * ord_x - ordq;
    };
    long long mk = mstar;
    while (mk <= cap && lower_bound_ord(mk) < k) ++mk;
    if (mk > cap) return std::nullopt;

    auto exact_term_ord = [&](long long n, long long m) {
        Rational of(factorial_valuation(p, m));
        Rational denom_ord(ordq);
        if (m < m1) {
            Rational d = spec.q() + pow(Rational(factorial(static_cast<unsigned long>(m))),
                                        spec.exponent_multiplier(n) * m);
            denom_ord = Rational(ord(p, d).finite_value());
        }
        return Rational(m - 1) * of - denom_ord + Rational(m) * ord_x;
    };
    long long M = mk;
    for (long long n = (mk - spec.delta()) / spec.gamma(); n >= 0; --n) {
        long long m = spec.gamma() * n + spec.delta();
        if (m >= mk) continue;
        if (exact_term_ord(n, m) >= k)
            M = m;
        else
            break;
    }
    return M;
}

}  // namespace detail

// Everywhere-convergent at every place; the radius is infinite by the family
// formula and finite-place tails are certified from Legendre's formula.
inline PowerSeries phi_series(const PhiSpec& spec) {
    auto radius = [](const Place& place) -> std::optional<RadiusEstimate> {
        Extended v = place.is_finite() ? Extended::minus_inf() : Extended::plus_inf();
        return RadiusEstimate{place, RadiusEstimate::Exact, RadiusEstimate::FamilyFormula, v};
    };
    auto tail = [spec](const Prime& p, long long ord_x, long long k) {
        return detail::phi_tail_start(spec, p, ord_x, k);
    };
    auto coeff = [spec](long long j) -> Rational {
        if (j < spec.delta() || (j - spec.delta()) % spec.gamma() != 0) return 0;
        return phi_coefficient(spec, (j - spec.delta()) / spec.gamma()).second;
    };
    return PowerSeries(coeff, spec.str(), radius, tail);
}

namespace detail {

// I_m = (m!)^(m-1) / (q + (m!)^(N m)); the telescoping boundary quantity.
inline Rational phi_boundary(const PhiSpec& spec, long long m) {
    Rational mf(factorial(static_cast<unsigned long>(m)));
    return pow(mf, m - 1) / (spec.q() + pow(mf, spec.constant_multiplier() * m));
}

}  // namespace detail

// Exact right-hand side of the summation formula: -(d!)^(d-1)/(q+(d!)^(N d)).
inline Rational summation_rhs(const PhiSpec& spec) {
    return -detail::phi_boundary(spec, spec.delta());
}

// The n-th bracketed term of the summation formula's left side, exactly.
inline Rational summation_term(const PhiSpec& spec, const Rational& x, long long n) {
    if (x == 0) throw std::domain_error("summation_term: x must be nonzero");
    if (n < 0) throw std::invalid_argument("summation_term: n must be >= 0");
    long long g = spec.gamma(), d = spec.delta(), N = spec.constant_multiplier();
    long long m = g * n + d;
    long long m_next = g * (n + 1) + d;
    Rational mf(factorial(static_cast<unsigned long>(m)));
    Rational mf_next(factorial(static_cast<unsigned long>(m_next)));
    Rational bracket = pow(mf_next, g) * pow(pochhammer(Rational(m + 1), g), m - 1) /
                           (spec.q() + pow(mf_next, N * m_next)) * pow(x, g) -
                       1 / (spec.q() + pow(mf, N * m));
    return pow(mf, m - 1) * pow(x, g * n) * bracket;
}

// Exact partial sum of the summation formula's left side for n = 0..M, and
// the telescoping remainder -I_(gamma(M+1)+delta) x^(gamma(M+1)); the pair
// satisfies partial + remainder = summation_rhs identically.
inline std::pair<Rational, Rational> summation_lhs_partial(const PhiSpec& spec, const Rational& x,
                                                           long long M) {
    if (x == 0) throw std::domain_error("summation_lhs_partial: x must be nonzero");
    if (M < 0) throw std::invalid_argument("summation_lhs_partial: M must be >= 0");
    long long g = spec.gamma(), d = spec.delta();
    Rational partial = 0;
    for (long long n = 0; n <= M; ++n) partial += summation_term(spec, x, n);
    Rational remainder = -detail::phi_boundary(spec, g * (M + 1) + d) * pow(x, g * (M + 1));
    return {partial, remainder};
}

struct SummationVerdict {
    ConvergenceVerdict::Status status;
    long long depth;
    Rational value;             // the exact rational sum (RHS)
    bool identity_exact;        // partial + remainder = RHS at every M <= depth
    Rational remainder_ord;     // finite place: ord_p of the remainder at M = depth
    Rational remainder_abs;     // archimedean: |remainder| at M = depth
    std::string witness;
};

// Confirms the exact telescoping identity at every M <= depth, then certifies
// remainder -> 0 at the given place.
inline SummationVerdict summation_verify(const PhiSpec& spec, const Rational& x,
                                         const Place& place, long long depth,
                                         const Rational& tol = kDefaultTolerance) {
    if (x == 0) throw std::domain_error("summation_verify: x must be nonzero");
    if (depth < 1) throw std::invalid_argument("summation_verify: depth must be >= 1");
    Rational rhs = summation_rhs(spec);
    bool exact = true;
    Rational remainder = 0, partial = 0;
    long long g = spec.gamma(), d = spec.delta();
    for (long long M = 0; M <= depth; ++M) {
        partial += summation_term(spec, x, M);
        Rational rem = -detail::phi_boundary(spec, g * (M + 1) + d) * pow(x, g * (M + 1));
        if (partial + rem != rhs) { exact = false; break; }
        remainder = rem;
    }
    SummationVerdict out{ConvergenceVerdict::Undetermined, depth, rhs, exact,
                         Rational(0),  Rational(0), ""};
    if (!exact) {
        out.witness = "telescoping identity failed before the requested depth";
        return out;
    }
    std::ostringstream w;
    if (place.is_finite()) {
        const Prime& p = place.prime();
        Valuation v = ord(p, remainder);
        out.remainder_ord = v.is_infinity() ? Rational(0) : Rational(v.finite_value());
        long long ord_x = ord(p, x).finite_value();
        auto cert = detail::phi_tail_start(spec, p, ord_x, 1);
        if (cert) {
            out.status = ConvergenceVerdict::ConvergesProven;
            w << "identity exact to M = " << depth << "; remainder valuation "
              << (v.is_infinity() ? std::string("+inf") : std::to_string(v.finite_value()))
              << " with family tail certificate driving it to +inf";
        } else {
            w << "identity exact but no tail certificate at this place";
        }
    } else {
        out.remainder_abs = abs(remainder);
        if (out.remainder_abs < tol) {
            out.status = ConvergenceVerdict::ConvergesProven;
            w << "identity exact to M = " << depth << "; |remainder| below tolerance "
              << to_string(tol);
        } else {
            w << "identity exact but |remainder| = " << to_string(out.remainder_abs)
              << " still above tolerance";
        }
    }
    out.witness = w.str();
    return out;
}

}  // namespace padiq
