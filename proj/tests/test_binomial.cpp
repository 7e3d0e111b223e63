#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "padiq/binomial.hpp"

using namespace padiq;

namespace {

std::mt19937_64 rng(0x5eed0004);

Rational random_small_rational() {
    std::uniform_int_distribution<long long> n(-40, 40), d(1, 40);
    return Rational(n(rng), d(rng));
}

}  // namespace

TEST_CASE("generalized binomial coefficients") {
    CHECK(gen_binom(Rational(1, 2), 0) == 1);
    CHECK(gen_binom(Rational(1, 2), 1) == Rational(1, 2));
    CHECK(gen_binom(Rational(1, 2), 2) == Rational(-1, 8));
    CHECK(gen_binom(Rational(1, 2), 3) == Rational(1, 16));
    CHECK(gen_binom(Rational(5), 2) == 10);
    CHECK(gen_binom(Rational(5), 6) == 0);
    CHECK(gen_binom(Rational(-1), 4) == 1);
    CHECK_THROWS_AS(gen_binom(Rational(1, 2), -1), std::invalid_argument);
}

TEST_CASE("pascal identity: 500 random cases") {
    for (int i = 0; i < 500; ++i) {
        Rational b = random_small_rational();
        long long n = 1 + static_cast<long long>(rng() % 20);
        CHECK(gen_binom(b, n) == gen_binom(b - 1, n) + gen_binom(b - 1, n - 1));
    }
}

TEST_CASE("radius regimes") {
    // |b|_p <= 1: radius exactly 1 (exponent 0)
    for (auto [bn, bd, pv] : {std::tuple{1, 2, 7}, {1, 3, 5}, {2, 5, 3}}) {
        auto est = binomial_radius(Rational(bn, bd), Place::finite(Prime(pv)));
        CHECK(est.kind == RadiusEstimate::Exact);
        CHECK(est.value.value == 0);
        auto arch = binomial_radius(Rational(bn, bd), Place::archimedean());
        CHECK(arch.value.value == 1);
    }
    // |b|_p > 1: radius p^(-1/(p-1)) / |b|_p
    auto est = binomial_radius(Rational(1, 5), Place::finite(Prime(5)));
    CHECK(est.value.value == Rational(5, 4));
    // polynomial regime
    CHECK(binomial_radius(Rational(4), Place::finite(Prime(5))).value.kind ==
          Extended::MinusInf);
    CHECK(binomial_radius(Rational(4), Place::archimedean()).value.kind == Extended::PlusInf);
}

TEST_CASE("regime boundary via term norms, p in {3,5}") {
    for (auto pv : {3, 5}) {
        Prime p(pv);
        PowerSeries f = binomial_series(Rational(1, pv));
        Place place = Place::finite(p);
        // t = 2 is above the boundary 1/(p-1) + 1: terms vanish
        Rational x_small = Rational(pv * pv);  // |x|_p = p^-2
        bool tail_small = true;
        for (long long n = 190; n <= 200; ++n)
            if (term_norm(f, n, x_small, place) > pow(Rational(p.value()), -50LL))
                tail_small = false;
        CHECK(tail_small);
        // t = 1 is below the boundary: norms blow up
        Rational x_big = Rational(pv);  // |x|_p = p^-1
        Rational best = 0;
        for (long long n = 0; n <= 200; ++n)
            best = std::max(best, term_norm(f, n, x_big, place));
        CHECK(best > pow(Rational(p.value()), 10LL));
    }
}

TEST_CASE("binomial coefficients in Z_p when |b|_p <= 1") {
    CHECK(binom_in_Zp(Rational(1, 2), Prime(7), 300).in_Zp);
    CHECK(binom_in_Zp(Rational(-3, 4), Prime(5), 300).in_Zp);
    auto bad = binom_in_Zp(Rational(1, 7), Prime(7), 50);
    CHECK_FALSE(bad.in_Zp);
    CHECK(bad.first_violation == 1);
}

TEST_CASE("rational points for p = 5, height 7") {
    auto pts = rational_points(Prime(5), 7);
    REQUIRE(pts.size() == 5);
    CHECK(pts[0].value() == Rational(-5, 6));
    CHECK(pts[1].value() == Rational(-5, 7));
    CHECK(pts[2].value() == 0);
    CHECK(pts[3].value() == Rational(5, 7));
    CHECK(pts[4].value() == Rational(5, 6));
    for (const auto& pt : pts) {
        CHECK(real_norm(pt.value()) < 1);
        CHECK(padic_norm(Prime(5), pt.value()) < 1);
    }
}

TEST_CASE("congruence/norm equivalence on a sample grid") {
    for (auto pv : {3, 5, 7}) {
        Prime p(pv);
        for (long long N = 1; N <= 4; ++N)
            for (long long u = -12; u <= 12; ++u)
                for (long long v = 1; v <= 12; ++v) {
                    if (std::gcd(std::abs(u), v) != 1) continue;
                    if (v % pv == 0) continue;
                    auto [cong, norm_cond] = lemma46_check(u, v, N, p);
                    CHECK(cong == norm_cond);
                }
    }
    CHECK_THROWS_AS(lemma46_check(2, 5, 2, Prime(5)), std::invalid_argument);
    CHECK_THROWS_AS(lemma46_check(2, 4, 2, Prime(5)), std::invalid_argument);
}

TEST_CASE("rational sum: (p,N,u,v) = (7,2,6,1)") {
    auto rep = rational_sum_verify(2, 6, 1, Prime(7), 10);
    CHECK(rep.oracle_agrees);
    CHECK(rep.equals_minus_uv);   // the |y-1|_7 < 1 branch is -6
    CHECK_FALSE(rep.equals_uv);
    CHECK(rep.relation == "-u/v");
    CHECK(agree(rep.series_value, from_rational(Prime(7), -6, 10)));
    CHECK_FALSE(rep.has_real_branch);  // X = 35 is not inside the real disc
}

TEST_CASE("rational sum real branch: (N,u,v) = (2,1,2)") {
    auto rep = rational_sum_verify(2, 1, 2, Prime(3), 8);
    CHECK(rep.has_real_branch);
    CHECK(abs(rep.real_value - Rational(1, 2)) < Rational(1, 1000000));
    CHECK(rep.real_equals_uv);
    CHECK(rep.oracle_agrees);
}

TEST_CASE("rational sum precondition failures") {
    CHECK_THROWS_AS(rational_sum_verify(2, 1, 3, Prime(7), 8), std::invalid_argument);  // 1 != 9 mod 7
    CHECK_THROWS_AS(rational_sum_verify(7, 6, 1, Prime(7), 8), std::invalid_argument);  // p | N
    CHECK_THROWS_AS(rational_sum_verify(2, 6, 7, Prime(7), 8), std::invalid_argument);  // p | v
}

TEST_CASE("multi-place sum with the root-of-unity gate") {
    // b = 1/2, x = -3/4: at p = 3 the series picks the branch -1/2
    auto reports = multi_place_sum(1, 2, Rational(-3, 4), {Place::finite(Prime(3))},
                                   Rational(1, 2), 12);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].hensel_checked);
    CHECK(reports[0].hensel_consistent);
    CHECK_FALSE(reports[0].gate_plus);
    CHECK(reports[0].gate_minus);
    CHECK(reports[0].certified == "-c");

    // archimedean place: the real sum is +1/2
    auto arch = multi_place_sum(1, 2, Rational(-3, 4), {Place::archimedean()}, Rational(1, 2));
    REQUIRE(arch.size() == 1);
    CHECK(arch[0].certified == "c");

    // precondition: |x|_v >= 1
    auto bad = multi_place_sum(1, 2, Rational(5), {Place::finite(Prime(3))}, Rational(1, 2));
    CHECK(bad[0].certified == "precondition violated");
}
