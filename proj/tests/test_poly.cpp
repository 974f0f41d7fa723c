#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "curvecap/groebner.hpp"

using namespace curvecap;
using cd = std::complex<double>;

namespace {
MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }
}

TEST_CASE("grevlex order pins the ascending monomial list", "[poly]") {
    // two variables: 1, z1, z2, z1^2, z1z2, z2^2, z1^3, z1^2 z2, z1 z2^2, z2^3
    std::vector<MultiIndex> expected = {
        mi({0, 0}), mi({1, 0}), mi({0, 1}), mi({2, 0}), mi({1, 1}),
        mi({0, 2}), mi({3, 0}), mi({2, 1}), mi({1, 2}), mi({0, 3}),
    };
    std::vector<MultiIndex> all;
    for (int d = 0; d <= 3; ++d)
        for (auto& m : monomials_of_degree(2, d)) all.push_back(m);
    REQUIRE(all.size() == expected.size());
    for (size_t k = 0; k < all.size(); ++k) CHECK(all[k] == expected[k]);
}

TEST_CASE("grevlex conformance: all 3-variable monomials of degree <= 3", "[poly]") {
    // z1 is least significant: at equal degree the larger exponent at the
    // first differing index makes the monomial smaller.
    std::vector<std::vector<int>> expected = {
        {0, 0, 0},
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
        {2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2},
        {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {1, 1, 1}, {1, 0, 2},
        {0, 3, 0}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3},
    };
    std::vector<MultiIndex> all;
    for (int d = 0; d <= 3; ++d)
        for (auto& m : monomials_of_degree(3, d)) all.push_back(m);
    REQUIRE(all.size() == expected.size());
    for (size_t k = 0; k < all.size(); ++k) CHECK(all[k] == mi(expected[k]));
    // spot checks from the definition
    CHECK(grevlex_cmp(mi({1, 0, 1}), mi({0, 2, 0})) == Ordering::Less); // z1z3 < z2^2
    CHECK(grevlex_cmp(mi({1, 0, 1}), mi({1, 0, 1})) == Ordering::Equal);
    CHECK_THROWS_AS(grevlex_cmp(mi({1, 0}), mi({1, 0, 0})), input_error);
}

TEST_CASE("grevlex respects multiplication and grading (randomized)", "[poly]") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> e(0, 5);
    for (int k = 0; k < 500; ++k) {
        MultiIndex a = mi({e(rng), e(rng), e(rng)});
        MultiIndex b = mi({e(rng), e(rng), e(rng)});
        MultiIndex g = mi({e(rng), e(rng), e(rng)});
        if (a.degree() < b.degree()) CHECK(grevlex_cmp(a, b) == Ordering::Less);
        Ordering o = grevlex_cmp(a, b);
        CHECK(grevlex_cmp(a + g, b + g) == o);
    }
}

TEST_CASE("leading term and leading homogeneous part", "[poly]") {
    Poly g1 = parse_poly("z2*z3 + z1*z3 - 3*z2^2 - z1*z2 + z1^2 + 2", 3);
    CHECK(g1.leading_monomial() == mi({0, 1, 1}));
    CHECK(g1.leading_coeff() == GaussRational(1));

    Poly g2 = parse_poly("z3^2 + z2^2 - z1^2 - 1", 3);
    CHECK(g2.leading_monomial() == mi({0, 0, 2}));

    Poly c5 = parse_poly("5", 2);
    CHECK(c5.leading_monomial() == mi({0, 0}));
    CHECK(c5.leading_coeff() == GaussRational(BigRational(5)));

    Poly p = parse_poly("z2^2 - z1^2 - z1 - 1", 2);
    CHECK(p.leading_homogeneous_part() == parse_poly("z2^2 - z1^2", 2));
    Poly hom = parse_poly("z1^2 + z1*z2", 2);
    CHECK(hom.leading_homogeneous_part() == hom);

    CHECK_THROWS_AS(Poly::zero(2).leading_term(), input_error);
    CHECK_THROWS_AS(Poly::zero(2).leading_homogeneous_part(), input_error);
}

TEST_CASE("homogenize and dehomogenize", "[poly]") {
    Poly p = parse_poly("z2^2 - z1^2 - 1", 2);
    Poly h = p.homogenize();
    CHECK(h.is_homogeneous());
    CHECK(h == parse_poly("z2^2 - z1^2 - z0^2", 3, /*first_var_index=*/0));
    CHECK(h.dehomogenize_at(0) == p);
    // chart at infinity: set z1 = 1 (remaining variables keep their order,
    // indices compress, so the old z2 prints as z1 here)
    CHECK(h.dehomogenize_at(1) == parse_poly("z1^2 - z0^2 - 1", 2, 0));
    // already homogeneous input round-trips too
    Poly line = parse_poly("z2 - z1", 2);
    CHECK(line.homogenize().dehomogenize_at(0) == line);
}

TEST_CASE("ring ops and evaluation", "[poly]") {
    Poly a = parse_poly("z1 + z2", 2), b = parse_poly("z1 - z2", 2);
    CHECK(a * b == parse_poly("z1^2 - z2^2", 2));
    CHECK((a - a).is_zero());
    CHECK((a + (-a)).term_count() == 0);

    Poly hyp = parse_poly("z2^2 - z1^2 - 1", 2);
    std::vector<GaussRational> pt = {GaussRational(BigRational(3, 4)),
                                     GaussRational(BigRational(5, 4))};
    CHECK(hyp.evaluate_exact(pt).is_zero());
    std::vector<cd> fpt = {cd(0.75, 0.0), cd(1.25, 0.0)};
    CHECK(std::abs(hyp.evaluate(fpt)) < 1e-15);
}

TEST_CASE("poly invariants after random ops", "[poly]") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> e(0, 4), coeff(-6, 6);
    auto rand_poly = [&] {
        std::vector<Term> ts;
        for (int k = 0; k < 6; ++k)
            ts.push_back({GaussRational(BigRational(coeff(rng)), BigRational(coeff(rng))),
                          mi({e(rng), e(rng), e(rng)})});
        return Poly::from_terms(3, std::move(ts));
    };
    for (int k = 0; k < 100; ++k) {
        Poly p = rand_poly(), q = rand_poly();
        CHECK((p + q).check_invariants());
        CHECK((p - q).check_invariants());
        CHECK((p * q).check_invariants());
        CHECK(p.homogenize().check_invariants());
    }
}

TEST_CASE("parser round trip and syntax", "[poly]") {
    std::vector<std::string> cases = {
        "z2^2 - z1^2 - 1",
        "10*z2^3 - 2*z1*z2^2 - 6*z1^2*z2 + z1^2*z3 + z1^3 - 7*z2 - 2*z3 + 3*z1",
        "(1/2)*z1 + (3/4)",
        "i*z1^2 - 2i",
        "z1*z2*z3",
    };
    for (const auto& c : cases) {
        Poly p = parse_poly(c, 3);
        CHECK(parse_poly(p.str(), 3) == p);
    }
    // juxtaposition works
    CHECK(parse_poly("2z1", 2) == parse_poly("2*z1", 2));
    CHECK_THROWS_AS(parse_poly("z9", 2), input_error);
    CHECK_THROWS_AS(parse_poly("z1 +", 2), input_error);

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> e(0, 4), coeff(-9, 9), den(1, 7);
    for (int k = 0; k < 100; ++k) {
        std::vector<Term> ts;
        for (int t = 0; t < 5; ++t)
            ts.push_back({GaussRational(BigRational(coeff(rng), den(rng)),
                                        BigRational(coeff(rng), den(rng))),
                          mi({e(rng), e(rng)})});
        Poly p = Poly::from_terms(2, std::move(ts));
        CHECK(parse_poly(p.str(), 2) == p);
    }
}

TEST_CASE("substitution", "[poly]") {
    // z1 -> z1 + z2, z2 -> z2 on the line polynomial
    Poly line = parse_poly("z2 - z1", 2);
    std::vector<Poly> subs = {parse_poly("z1 + z2", 2), parse_poly("z2", 2)};
    CHECK(line.substitute(subs) == parse_poly("-z1", 2));
    // identity substitution is exact identity
    std::vector<Poly> id = {Poly::variable(2, 1), Poly::variable(2, 2)};
    Poly p = parse_poly("(1/3)*z1^2*z2 - 4*z2 + i", 2);
    CHECK(p.substitute(id) == p);
}
