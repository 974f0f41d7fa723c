#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "curvecap/rational.hpp"

using namespace curvecap;

TEST_CASE("rational arithmetic basics", "[rational]") {
    BigRational half(1, 2), third(1, 3);
    CHECK((half + third) == BigRational(5, 6));
    CHECK((half * third) == BigRational(1, 6));
    CHECK((half / third) == BigRational(3, 2));
    CHECK((half - half).is_zero());
    CHECK_THROWS_AS(half / BigRational(0), input_error);
}

TEST_CASE("rational canonical form", "[rational]") {
    BigRational r(6, -10);
    CHECK(r.numerator() == -3);
    CHECK(r.denominator() == 5);
    CHECK(r == BigRational(-3, 5));
    CHECK(BigRational(0, 7).str() == "0");
}

TEST_CASE("gauss rational field ops", "[rational]") {
    GaussRational i = GaussRational::i();
    GaussRational one_plus_i(BigRational(1), BigRational(1));
    GaussRational one_minus_i(BigRational(1), BigRational(-1));
    CHECK(one_plus_i * one_minus_i == GaussRational(BigRational(2)));
    // 1 / (1+i) = 1/2 - (1/2) i
    GaussRational inv = one_plus_i.inverse();
    CHECK(inv == GaussRational(BigRational(1, 2), BigRational(-1, 2)));
    CHECK(i * i == GaussRational(BigRational(-1)));
    CHECK_THROWS_AS(one_plus_i / GaussRational(), input_error);
}

TEST_CASE("gauss rational randomized field axioms", "[rational]") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 12);
    auto rand_gr = [&] {
        return GaussRational(BigRational(num(rng), den(rng)), BigRational(num(rng), den(rng)));
    };
    for (int k = 0; k < 200; ++k) {
        GaussRational a = rand_gr(), b = rand_gr(), c = rand_gr();
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) CHECK(a * a.inverse() == GaussRational(BigRational(1)));
    }
}

TEST_CASE("nearest-double conversion", "[rational]") {
    CHECK(BigRational(6, 10).to_double() == 0.6);
    CHECK(BigRational(0).to_double() == 0.0);
    CHECK(BigRational(1, 3).to_double() == Catch::Approx(1.0 / 3.0).epsilon(0));
    // 2/3 rounds UP to nearest, which truncation alone would miss
    CHECK(BigRational(2, 3).to_double() == 2.0 / 3.0);
    bool overflow = false;
    BigRational huge(mpz_class("1" + std::string(400, '0')), mpz_class(1));
    double d = huge.to_double(&overflow);
    CHECK(overflow);
    CHECK(std::isinf(d));
}

TEST_CASE("text round trip", "[rational]") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-99, 99);
    std::uniform_int_distribution<long> den(1, 40);
    for (int k = 0; k < 200; ++k) {
        GaussRational g(BigRational(num(rng), den(rng)), BigRational(num(rng), den(rng)));
        CHECK(GaussRational::parse(g.str()) == g);
    }
    CHECK(GaussRational::parse("3/4") == GaussRational(BigRational(3, 4)));
    CHECK(GaussRational::parse("(1/2)+(1/3)i") ==
          GaussRational(BigRational(1, 2), BigRational(1, 3)));
    CHECK(GaussRational::parse("(1/2)-(1/3)i") ==
          GaussRational(BigRational(1, 2), BigRational(-1, 3)));
    CHECK(GaussRational::parse("i") == GaussRational::i());
    CHECK_THROWS_AS(GaussRational::parse("x"), input_error);
}
