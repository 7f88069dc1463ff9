#include <doctest.h>

#include <random>

#include "omegalab/interval.hpp"
#include "omegalab/rational.hpp"

using namespace omegalab;

TEST_CASE("rationals normalize to lowest terms") {
    CHECK(Rational(14, 21).str() == "2/3");
    CHECK(Rational(-14, 21).str() == "-2/3");
    CHECK(Rational(14, -21).str() == "-2/3");
    CHECK(Rational(0, 5).str() == "0");
    CHECK(Rational(8, 4).str() == "2");
    CHECK(Rational(7, 33).num() == 7);
    CHECK(Rational(7, 33).den() == 33);
}

TEST_CASE("construction rejects a zero denominator") {
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational::from_string("1/0"), std::domain_error);
}

TEST_CASE("parsing accepts p/q and integers, rejects junk") {
    CHECK(Rational::from_string("7/33").str() == "7/33");
    CHECK(Rational::from_string("-3/9").str() == "-1/3");
    CHECK(Rational::from_string("42").str() == "42");
    CHECK(Rational::from_string("0").str() == "0");
    for (const char* bad : {"", "/", "1/", "/2", "a/b", "1.5", "1/2/3", "1/-2", "--1", " 1/2"})
        CHECK_THROWS_AS(Rational::from_string(bad), std::domain_error);
}

TEST_CASE("arithmetic is exact") {
    Rational a(1, 3), b(1, 6);
    CHECK((a + b).str() == "1/2");
    CHECK((a - b).str() == "1/6");
    CHECK((a * b).str() == "1/18");
    CHECK((a / b).str() == "2");
    CHECK((-a).str() == "-1/3");
    CHECK_THROWS_AS(a / Rational(0), std::domain_error);

    // 1/3 + 1/3 + 1/3 lands exactly on 1; no drift is possible.
    Rational sum;
    for (int i = 0; i < 3; ++i) sum += a;
    CHECK(sum == Rational(1));
}

TEST_CASE("ordering is total and matches cross multiplication") {
    std::mt19937_64 rng(7001);
    std::uniform_int_distribution<long> num(-500, 500), den(1, 500);
    for (int t = 0; t < 2000; ++t) {
        Rational a(num(rng), den(rng)), b(num(rng), den(rng));
        Integer lhs = a.num() * b.den(), rhs = b.num() * a.den();
        CHECK((a < b) == (lhs < rhs));
        CHECK((a == b) == (lhs == rhs));
        CHECK((a > b) == (lhs > rhs));
    }
}

TEST_CASE("floor rounds toward negative infinity") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(6, 3).floor() == 2);
}

TEST_CASE("open intervals demand lo < hi and test strict membership") {
    OpenInterval iv(Rational(1, 3), Rational(1, 2));
    CHECK_THROWS_AS(OpenInterval(Rational(1, 2), Rational(1, 2)), std::domain_error);
    CHECK_THROWS_AS(OpenInterval(Rational(1, 2), Rational(1, 3)), std::domain_error);

    CHECK(iv.contains(Rational(2, 5)));
    CHECK_FALSE(iv.contains(Rational(1, 3)));  // endpoints excluded
    CHECK_FALSE(iv.contains(Rational(1, 2)));
    CHECK_FALSE(iv.contains(Rational(1, 4)));
    CHECK(iv.width() == Rational(1, 6));
    CHECK(iv.midpoint() == Rational(5, 12));
    CHECK(iv.str() == "(1/3, 1/2)");
}

TEST_CASE("strict containment needs room on both sides") {
    OpenInterval outer(Rational(0), Rational(1));
    CHECK(outer.strictly_contains(OpenInterval(Rational(1, 4), Rational(1, 2))));
    CHECK_FALSE(outer.strictly_contains(OpenInterval(Rational(0), Rational(1, 2))));
    CHECK_FALSE(outer.strictly_contains(OpenInterval(Rational(1, 4), Rational(1))));
}
