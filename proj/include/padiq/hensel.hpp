#pragma once

#include <stdexcept>

#include "padiq/padic.hpp"
#include "padiq/prime.hpp"
#include "padiq/rational.hpp"
#include "padiq/valuation.hpp"

namespace padiq {

struct no_root_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct unsupported_case_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Solve Y^s = t in Q_p within the disc |y-1|_p < 1.
struct HenselProblem {
    Prime p;
    long long exponent;  // s >= 1
    Rational target;     // t, must be a p-adic unit
};

namespace detail {

inline Integer rational_mod(const Rational& x, const Integer& mod) {
    Integer n = ((num(x) % mod) + mod) % mod;
    return n * invmod(den(x), mod) % mod;
}

}  // namespace detail

// Newton lifting of the root of Y^s = t seeded at Y = 1, for p not dividing s;
// the wild case p | s is rejected except the classical 2-adic square root
// (p = 2, s = 2, t = 1 mod 8), lifted bit by bit with the y = 1 (mod 4) branch.
inline PadicNumber hensel_root(const HenselProblem& prob, long long precision) {
    const Prime& p = prob.p;
    long long s = prob.exponent;
    if (s < 1) throw std::invalid_argument("hensel_root: exponent must be positive");
    if (precision < 1) throw std::invalid_argument("hensel_root: precision must be >= 1");
    if (padic_norm(p, prob.target) != 1)
        throw no_root_error("hensel_root: target is not a p-adic unit, no root with |y-1| < 1");
    if (s == 1) return from_rational(p, prob.target, precision);

    Integer pv(p.value());
    if (s % p.value() == 0) {
        if (!(p.value() == 2 && s == 2))
            throw unsupported_case_error("hensel_root: wild case p | s is not supported");
        // 2-adic square root: t = 1 (mod 8) required, root taken = 1 (mod 4)
        long long k = std::max<long long>(precision, 3);
        Integer mod = pow(Integer(2), static_cast<unsigned long>(k));
        Integer t = detail::rational_mod(prob.target, mod);
        if (t % 8 != 1)
            throw no_root_error("hensel_root: 2-adic square requires t = 1 (mod 8)");
        Integer y = 1;
        for (long long j = 3; j < k; ++j) {
            Integer pj = pow(Integer(2), static_cast<unsigned long>(j));
            Integer r = ((t - y * y) / pj) % 2;
            if (r < 0) r += 2;
            if (r == 1) y += pj / 2;  // adjust bit j-1 of y (y odd, (y+2^(j-1))^2 = y^2 + 2^j y)
        }
        return PadicNumber::make(p, 0, y % pow(Integer(2), static_cast<unsigned long>(precision)),
                                 precision);
    }

    Integer modp = pv;
    Integer t1 = detail::rational_mod(prob.target, modp);
    if (t1 % pv != 1)
        throw no_root_error("hensel_root: residue equation has no solution with y = 1 (mod p)");

    long long j = 1;
    Integer y = 1;
    while (j < precision) {
        j = std::min(precision, 2 * j);
        Integer mod = pow(pv, static_cast<unsigned long>(j));
        Integer t = detail::rational_mod(prob.target, mod);
        // y <- y - (y^s - t) / (s y^(s-1)) (mod p^j)
        Integer ys1 = 1;
        for (long long i = 0; i < s - 1; ++i) ys1 = ys1 * y % mod;
        Integer f = (ys1 * y - t) % mod;
        Integer d = detail::invmod(Integer(s) * ys1 % mod, mod);
        y = ((y - f * d) % mod + mod) % mod;
    }
    return PadicNumber::make(p, 0, y, precision);
}

}  // namespace padiq
