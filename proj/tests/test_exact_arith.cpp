#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "padiq/prime.hpp"
#include "padiq/rational.hpp"
#include "padiq/valuation.hpp"

using namespace padiq;

namespace {

std::mt19937_64 rng(0x5eed0001);

Rational random_rational(bool allow_zero = true) {
    std::uniform_int_distribution<long long> n(-2000, 2000), d(1, 2000);
    Rational r(n(rng), d(rng));
    if (!allow_zero && r == 0) r = Rational(1, d(rng));
    return r;
}

Prime random_prime() {
    static const unsigned long long ps[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 101};
    return Prime(ps[rng() % 10]);
}

}  // namespace

TEST_CASE("rational helpers") {
    CHECK(num(Rational(6, 4)) == 3);
    CHECK(den(Rational(6, 4)) == 2);
    CHECK(abs(Rational(-3, 7)) == Rational(3, 7));
    CHECK(pow(Rational(2, 3), -2) == Rational(9, 4));
    CHECK(pow(Integer(3), 5ul) == 243);
    CHECK(ceil_rational(Rational(7, 2)) == 4);
    CHECK(ceil_rational(Rational(-7, 2)) == -3);
    CHECK(ceil_rational(Rational(4)) == 4);
    CHECK(factorial(5) == 120);
    CHECK(factorial(0) == 1);
    CHECK_THROWS_AS(pow(Rational(0), -1), std::domain_error);
}

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(parse_rational("17") == 17);
    CHECK(to_string(Rational(-3, 2)) == "-3/2");
    CHECK(to_string(Rational(8, 4)) == "2");
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
    for (int i = 0; i < 200; ++i) {
        Rational r = random_rational();
        CHECK(parse_rational(to_string(r)) == r);
    }
}

TEST_CASE("prime validation") {
    CHECK(Prime(2).value() == 2);
    CHECK(Prime(97).value() == 97);
    CHECK(Prime(1000003).value() == 1000003);
    CHECK_THROWS_AS(Prime(1), std::domain_error);
    CHECK_THROWS_AS(Prime(0), std::domain_error);
    CHECK_THROWS_AS(Prime(91), std::domain_error);  // 7 * 13
    CHECK_THROWS_AS(Prime(1000001), std::domain_error);
    CHECK_THROWS_AS(Prime(Prime::kMaxValue), std::domain_error);
}

TEST_CASE("norm and ord table") {
    CHECK(padic_norm(Prime(5), 25) == Rational(1, 25));
    CHECK(padic_norm(Prime(2), 100) == Rational(1, 4));
    CHECK(padic_norm(Prime(7), Rational(196, 5)) == Rational(1, 49));
    CHECK(ord(Prime(5), 25) == Valuation::of(2));
    CHECK(ord(Prime(3), 2) == Valuation::of(0));
    CHECK(ord(Prime(7), Rational(50, 49)) == Valuation::of(-2));
    CHECK(ord(Prime(3), 0).is_infinity());
    CHECK(padic_norm(Prime(3), 0) == 0);
    CHECK(real_norm(Rational(-7, 3)) == Rational(7, 3));
    CHECK(norm_at(Place::archimedean(), -2) == 2);
    CHECK(norm_at(Place::finite(Prime(5)), 10) == Rational(1, 5));
}

TEST_CASE("distance inversion") {
    CHECK(padic_norm(Prime(5), 6879 - 4) == Rational(1, 625));
    CHECK(padic_norm(Prime(5), 5 - 4) == 1);
    CHECK(Rational(1, 625) < Rational(1));
}

TEST_CASE("places order and printing") {
    CHECK(Place::archimedean().str() == "inf");
    CHECK(Place::finite(Prime(11)).str() == "11");
    CHECK(Place::finite(Prime(3)) < Place::finite(Prime(5)));
    CHECK(Place::finite(Prime(3)) < Place::archimedean());
    CHECK_FALSE(Place::archimedean() < Place::finite(Prime(3)));
}

TEST_CASE("legendre formula vs brute force") {
    for (auto pv : {2, 3, 5, 7, 11}) {
        Prime p(pv);
        Integer brute = 0;
        for (long long n = 1; n <= 600; ++n) {
            brute += detail::multiplicity(p, n);
            CHECK(factorial_valuation(p, n) == brute);
        }
    }
}

TEST_CASE("digit sum") {
    CHECK(digit_sum(Prime(2), 100) == 3);  // 1100100
    CHECK(digit_sum(Prime(5), 0) == 0);
    CHECK(digit_sum(Prime(7), 6) == 6);
    CHECK_THROWS_AS(digit_sum(Prime(3), -1), std::invalid_argument);
}

TEST_CASE("ord additivity: 500 random cases") {
    for (int i = 0; i < 500; ++i) {
        Prime p = random_prime();
        Rational x = random_rational(false), y = random_rational(false);
        CHECK(ord(p, x * y).finite_value() ==
              ord(p, x).finite_value() + ord(p, y).finite_value());
        CHECK(padic_norm(p, x * y) == padic_norm(p, x) * padic_norm(p, y));
    }
}

TEST_CASE("ultrametric inequality: 500 random cases") {
    for (int i = 0; i < 500; ++i) {
        Prime p = random_prime();
        Rational x = random_rational(), y = random_rational();
        Rational nx = padic_norm(p, x), ny = padic_norm(p, y);
        CHECK(padic_norm(p, x + y) <= std::max(nx, ny));
    }
}

TEST_CASE("sharp ultrametric: 500 random cases with distinct norms") {
    int done = 0;
    while (done < 500) {
        Prime p = random_prime();
        Rational x = random_rational(false), y = random_rational(false);
        Rational nx = padic_norm(p, x), ny = padic_norm(p, y);
        if (nx == ny) continue;
        CHECK(padic_norm(p, x + y) == std::max(nx, ny));
        ++done;
    }
}
