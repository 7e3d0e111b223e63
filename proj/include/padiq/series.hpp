#pragma once

#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "padiq/padic.hpp"
#include "padiq/prime.hpp"
#include "padiq/rational.hpp"
#include "padiq/valuation.hpp"

namespace padiq {

struct not_convergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct depth_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr long long kDefaultDepth = 256;
inline constexpr long long kDefaultMaxDepth = 8192;
inline const Rational kDefaultTolerance = Rational(1, 1000000000);

// A rational extended with the two infinities, for radius exponents/values.
struct Extended {
    enum Kind { Finite, PlusInf, MinusInf } kind = Finite;
    Rational value;

    static Extended finite(Rational v) { return {Finite, std::move(v)}; }
    static Extended plus_inf() { return {PlusInf, {}}; }
    static Extended minus_inf() { return {MinusInf, {}}; }

    std::string str() const {
        if (kind == PlusInf) return "+inf";
        if (kind == MinusInf) return "-inf";
        return to_string(value);
    }
};

// Finite place: radius = p^(-exponent), exponent in Q u {+-inf}
// (-inf meaning radius infinity, +inf meaning radius 0).
// Archimedean place: value is the radius itself (PlusInf meaning infinity).
struct RadiusEstimate {
    Place place;
    enum Kind { Exact, Empirical } kind;
    enum Method { RootTestPrefix, RatioTestPrefix, FamilyFormula } method;
    Extended value;

    std::string method_str() const {
        switch (method) {
            case RootTestPrefix: return "root-test-prefix";
            case RatioTestPrefix: return "ratio-test-prefix";
            default: return "family-formula";
        }
    }
};

struct ConvergenceVerdict {
    enum Status { ConvergesProven, DivergesProven, Undetermined } status;
    long long depth;
    std::string witness;

    std::string status_str() const {
        switch (status) {
            case ConvergesProven: return "ConvergesProven";
            case DivergesProven: return "DivergesProven";
            default: return "Undetermined";
        }
    }
};

// Lazy rational-coefficient power series. Known families attach an exact
// radius rule and a p-adic tail certificate; without them only empirical
// prefix estimates (never certifying convergence) are available.
class PowerSeries {
public:
    using CoeffFn = std::function<Rational(long long)>;
    // exact radius at a place, when the family admits a formula
    using RadiusFn = std::function<std::optional<RadiusEstimate>(const Place&)>;
    // smallest M such that every term with index >= M has ord_p >= k,
    // given a lower bound ord_x on the argument's valuation
    using TailFn =
        std::function<std::optional<long long>(const Prime&, long long ord_x, long long k)>;

    explicit PowerSeries(CoeffFn coeff, std::string family = "custom", RadiusFn radius = {},
                         TailFn tail = {})
        : coeff_(std::move(coeff)),
          family_(std::move(family)),
          radius_(std::move(radius)),
          tail_(std::move(tail)) {}

    Rational coeff(long long n) const {
        if (n < 0) throw std::invalid_argument("PowerSeries: negative index");
        return coeff_(n);
    }
    const std::string& family() const { return family_; }
    std::optional<RadiusEstimate> exact_radius(const Place& place) const {
        return radius_ ? radius_(place) : std::nullopt;
    }
    std::optional<long long> tail_start(const Prime& p, long long ord_x, long long k) const {
        return tail_ ? tail_(p, ord_x, k) : std::nullopt;
    }

private:
    CoeffFn coeff_;
    std::string family_;
    RadiusFn radius_;
    TailFn tail_;
};

// Polynomial series from an explicit coefficient list; converges everywhere.
inline PowerSeries from_coefficients(std::vector<Rational> coeffs) {
    long long deg = static_cast<long long>(coeffs.size());
    auto radius = [](const Place& place) -> std::optional<RadiusEstimate> {
        Extended v = place.is_finite() ? Extended::minus_inf() : Extended::plus_inf();
        return RadiusEstimate{place, RadiusEstimate::Exact, RadiusEstimate::FamilyFormula, v};
    };
    auto tail = [deg](const Prime&, long long, long long) -> std::optional<long long> {
        return deg;
    };
    return PowerSeries(
        [coeffs = std::move(coeffs)](long long n) {
            return n < static_cast<long long>(coeffs.size()) ? coeffs[static_cast<std::size_t>(n)]
                                                             : Rational(0);
        },
        "polynomial", radius, tail);
}

// a_n = 1/n!; radius p^(-1/(p-1)) at finite places, entire over R.
inline PowerSeries reciprocal_factorial_series() {
    auto radius = [](const Place& place) -> std::optional<RadiusEstimate> {
        Extended v = place.is_archimedean()
                         ? Extended::plus_inf()
                         : Extended::finite(Rational(1, place.prime().value() - 1));
        return RadiusEstimate{place, RadiusEstimate::Exact, RadiusEstimate::FamilyFormula, v};
    };
    auto tail = [](const Prime& p, long long ord_x, long long k) -> std::optional<long long> {
        // ord(x^n/n!) >= n*(ord_x - 1/(p-1))
        Rational margin = Rational(ord_x) - Rational(1, p.value() - 1);
        if (margin <= 0) return std::nullopt;
        Rational m = Rational(k) / margin;
        Integer M = num(m) / den(m) + 1;
        return std::max<long long>(0, static_cast<long long>(M));
    };
    return PowerSeries([](long long n) { return Rational(1, factorial(static_cast<unsigned long>(n))); },
                       "reciprocal-factorial", radius, tail);
}

inline PowerSeries cauchy_product(const PowerSeries& f, const PowerSeries& g) {
    return PowerSeries(
        [f, g](long long n) {
            Rational s = 0;
            for (long long i = 0; i <= n; ++i) s += f.coeff(i) * g.coeff(n - i);
            return s;
        },
        "product(" + f.family() + "," + g.family() + ")");
}

inline Rational term_norm(const PowerSeries& f, long long n, const Rational& x,
                          const Place& place) {
    if (n < 0) throw std::invalid_argument("term_norm: n must be >= 0");
    return norm_at(place, f.coeff(n) * pow(x, n));
}

inline RadiusEstimate radius(const PowerSeries& f, const Place& place,
                             long long depth = kDefaultDepth) {
    if (depth < 8) throw std::invalid_argument("radius: depth must be >= 8");
    if (auto exact = f.exact_radius(place)) return *exact;

    long long window = std::max<long long>(8, depth / 4);
    if (place.is_finite()) {
        const Prime& p = place.prime();
        std::optional<Rational> t;
        for (long long n = depth - window + 1; n <= depth; ++n) {
            if (n < 1) continue;
            Valuation v = ord(p, f.coeff(n));
            if (v.is_infinity()) continue;
            Rational tn = Rational(-v.finite_value(), n);
            if (!t || tn > *t) t = tn;
        }
        Extended value = t ? Extended::finite(*t) : Extended::minus_inf();
        return {place, RadiusEstimate::Empirical, RadiusEstimate::RootTestPrefix, value};
    }
    std::optional<Rational> last;
    for (long long n = depth - window; n < depth; ++n) {
        if (n < 0) continue;
        Rational an = f.coeff(n), an1 = f.coeff(n + 1);
        if (an == 0 || an1 == 0) continue;
        last = abs(an) / abs(an1);
    }
    Extended value = last ? Extended::finite(*last) : Extended::plus_inf();
    return {place, RadiusEstimate::Empirical, RadiusEstimate::RatioTestPrefix, value};
}

inline ConvergenceVerdict converges_at(const PowerSeries& f, const Rational& x,
                                       const Place& place, long long depth = kDefaultDepth) {
    if (depth < 8) throw std::invalid_argument("converges_at: depth must be >= 8");
    if (x == 0)
        return {ConvergenceVerdict::ConvergesProven, depth, "x = 0: only the constant term survives"};

    RadiusEstimate est = radius(f, place, depth);
    std::ostringstream w;
    if (est.kind == RadiusEstimate::Exact) {
        if (place.is_finite()) {
            long long ord_x = ord(place.prime(), x).finite_value();
            if (est.value.kind == Extended::MinusInf)
                return {ConvergenceVerdict::ConvergesProven, depth,
                        "family-formula radius is infinite at this place"};
            if (est.value.kind == Extended::PlusInf)
                return {ConvergenceVerdict::DivergesProven, depth,
                        "family-formula radius is 0 and |x|_p > 0"};
            if (Rational(ord_x) > est.value.value) {
                w << "|x|_p = p^-" << ord_x << " < exact radius p^-(" << to_string(est.value.value)
                  << ")";
                return {ConvergenceVerdict::ConvergesProven, depth, w.str()};
            }
            if (Rational(ord_x) < est.value.value) {
                w << "|x|_p = p^-" << ord_x << " > exact radius p^-(" << to_string(est.value.value)
                  << ")";
                return {ConvergenceVerdict::DivergesProven, depth, w.str()};
            }
            return {ConvergenceVerdict::Undetermined, depth,
                    "|x|_p equals the exact radius; boundary behaviour is not decided"};
        }
        if (est.value.kind == Extended::PlusInf)
            return {ConvergenceVerdict::ConvergesProven, depth,
                    "family-formula radius is infinite over R"};
        Rational nx = real_norm(x);
        if (nx < est.value.value) {
            w << "|x| = " << to_string(nx) << " < exact radius " << to_string(est.value.value);
            return {ConvergenceVerdict::ConvergesProven, depth, w.str()};
        }
        if (nx > est.value.value) {
            w << "|x| = " << to_string(nx) << " > exact radius " << to_string(est.value.value);
            return {ConvergenceVerdict::DivergesProven, depth, w.str()};
        }
        return {ConvergenceVerdict::Undetermined, depth,
                "|x| equals the exact radius; boundary behaviour is not decided"};
    }

    // Empirical radius cannot certify convergence. At a finite place, term
    // norms >= 1 across the whole inspected tail do certify the terms fail
    // to tend to 0.
    if (place.is_finite()) {
        bool bounded_below = true;
        for (long long n = depth / 2; n <= depth; ++n) {
            if (term_norm(f, n, x, place) < 1) { bounded_below = false; break; }
        }
        if (bounded_below)
            return {ConvergenceVerdict::DivergesProven, depth,
                    "term norms stay >= 1 over the inspected prefix tail (terms not -> 0)"};
    }
    return {ConvergenceVerdict::Undetermined, depth,
            "only an empirical radius estimate is available at this depth"};
}

// Archimedean evaluation: exact rational partial sum, stopped when eight
// consecutive partial-sum gaps fall below the tolerance. Tolerance-bounded,
// not certified.
inline Rational evaluate_real(const PowerSeries& f, const Rational& x,
                              const Rational& tol = kDefaultTolerance,
                              long long max_depth = kDefaultMaxDepth) {
    ConvergenceVerdict v = converges_at(f, x, Place::archimedean());
    if (v.status != ConvergenceVerdict::ConvergesProven)
        throw not_convergent("evaluate_real: convergence not proven at x (" + v.witness + ")");
    if (tol <= 0) throw std::invalid_argument("evaluate_real: tolerance must be positive");
    Rational sum = f.coeff(0);
    Rational xn = 1;
    int quiet = 0;
    for (long long n = 1; n <= max_depth; ++n) {
        xn *= x;
        Rational term = f.coeff(n) * xn;
        sum += term;
        quiet = (abs(term) < tol) ? quiet + 1 : 0;
        if (quiet >= 8) return sum;
    }
    throw depth_exhausted("evaluate_real: tolerance not reached within max depth");
}

namespace detail {

inline PadicNumber reduce_to_window(const Prime& p, const Rational& partial, long long k) {
    if (partial == 0) return PadicNumber::zero_at(p, k);
    long long v = ord(p, partial).finite_value();
    if (v >= k) return PadicNumber::zero_at(p, k);
    return from_rational(p, partial, k - v);
}

}  // namespace detail

// Finite-place evaluation at a rational point: sums exactly up to the
// certified tail index, then reduces modulo p^k (absolute precision k).
inline PadicNumber evaluate_padic(const PowerSeries& f, const Rational& x, const Prime& p,
                                  long long k, long long max_depth = kDefaultMaxDepth) {
    ConvergenceVerdict v = converges_at(f, x, Place::finite(p));
    if (v.status != ConvergenceVerdict::ConvergesProven)
        throw not_convergent("evaluate_padic: convergence not proven at x (" + v.witness + ")");
    if (x == 0) return detail::reduce_to_window(p, f.coeff(0), k);
    long long ord_x = ord(p, x).finite_value();
    auto M = f.tail_start(p, ord_x, k);
    if (!M) throw not_convergent("evaluate_padic: no tail certificate for this family");
    if (*M > max_depth) throw depth_exhausted("evaluate_padic: certified tail exceeds max depth");
    Rational partial = 0, xn = 1;
    for (long long n = 0; n < *M; ++n) {
        partial += f.coeff(n) * xn;
        xn *= x;
    }
    return detail::reduce_to_window(p, partial, k);
}

// Finite-place evaluation at a (possibly non-rational) truncated p-adic point.
inline PadicNumber evaluate_padic_at(const PowerSeries& f, const PadicNumber& x, long long k,
                                     long long max_depth = kDefaultMaxDepth) {
    const Prime& p = x.prime();
    if (x.is_exact_zero()) return detail::reduce_to_window(p, f.coeff(0), k);
    auto est = f.exact_radius(Place::finite(p));
    if (!est) throw not_convergent("evaluate_padic_at: no exact radius for this family");
    long long ord_x = x.is_regular() ? x.valuation() : x.window();
    bool inside = est->value.kind == Extended::MinusInf ||
                  (est->value.kind == Extended::Finite && Rational(ord_x) > est->value.value);
    if (!inside) throw not_convergent("evaluate_padic_at: |x|_p not inside the exact radius");
    auto M = f.tail_start(p, ord_x, k);
    if (!M) throw not_convergent("evaluate_padic_at: no tail certificate for this family");
    if (*M > max_depth)
        throw depth_exhausted("evaluate_padic_at: certified tail exceeds max depth");

    for (long long W = k + 16; W <= 32 * (k + 16); W *= 2) {
        PadicNumber acc = detail::reduce_to_window(p, f.coeff(0), W);
        PadicNumber xn = from_rational(p, 1, W);
        bool ok = true;
        try {
            for (long long n = 1; n < *M; ++n) {
                xn = xn * x;
                Rational an = f.coeff(n);
                if (an == 0) continue;
                acc = acc + from_rational(p, an, W) * xn;
            }
        } catch (const precision_exhausted&) {
            ok = false;
        }
        if (!ok) continue;
        long long window = acc.is_exact_zero() ? k : acc.window();
        if (window < k) continue;
        if (acc.is_exact_zero() || acc.is_zero_sentinel()) return PadicNumber::zero_at(p, k);
        if (acc.valuation() >= k) return PadicNumber::zero_at(p, k);
        return acc.truncated(k - acc.valuation());
    }
    throw precision_exhausted("evaluate_padic_at: could not reach the requested window");
}

inline bool coefficients_equal(const PowerSeries& f, const PowerSeries& g, long long degree) {
    if (degree < 0) throw std::invalid_argument("coefficients_equal: degree must be >= 0");
    for (long long n = 0; n <= degree; ++n)
        if (f.coeff(n) != g.coeff(n)) return false;
    return true;
}

}  // namespace padiq
