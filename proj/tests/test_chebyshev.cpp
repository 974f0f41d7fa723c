#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "curvecap/chebyshev.hpp"
#include "oracles.hpp"

using namespace curvecap;

namespace {

Ideal hyperbola_ideal() { return Ideal::parse(2, {"z2^2 - z1^2 - 1"}); }
Ideal line_ideal() { return Ideal::parse(2, {"z2 - z1"}); }

CompactSet circle_sample(const Ideal& ideal, int m, long num = 1, long den = 1) {
    SamplerOptions opts;
    opts.threads = 2;
    return build_set(ideal, rational_circle(m, BigRational(num, den)), 1e9, opts);
}

} // namespace

TEST_CASE("minimax with no corrections returns the sup of the target", "[chebyshev]") {
    MinimaxProblem P;
    P.target.resize(8);
    for (int k = 0; k < 8; ++k)
        P.target(k) = std::pow(std::polar(1.0, 2.0 * M_PI * k / 8.0), 5);
    P.basis_evals.resize(8, 0);
    ChebResult r = minimax_solve(P);
    CHECK(r.converged);
    CHECK(r.minimax_value == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("monic minimax on a symmetric real grid", "[chebyshev]") {
    // degree 1: target t, correction {1}; best value 1 at zero coefficient
    const int M = 41;
    MinimaxProblem P1;
    P1.target.resize(M);
    P1.basis_evals.resize(M, 1);
    for (int i = 0; i < M; ++i) {
        double t = -1.0 + 2.0 * i / (M - 1);
        P1.target(i) = t;
        P1.basis_evals(i, 0) = 1.0;
    }
    ChebResult r1 = minimax_solve(P1);
    CHECK(r1.minimax_value == Catch::Approx(1.0).margin(1e-8));
    CHECK(std::abs(r1.coefficients(0)) < 1e-8);
    CHECK(r1.minimax_value >= oracle::brute_minimax(P1.basis_evals, P1.target) - 1e-12);

    // degree 2 on a dense grid: classical minimax t^2 - 1/2, value 1/2
    const int M2 = 201;
    MinimaxProblem P2;
    P2.target.resize(M2);
    P2.basis_evals.resize(M2, 2);
    for (int i = 0; i < M2; ++i) {
        double t = -1.0 + 2.0 * i / (M2 - 1);
        P2.target(i) = t * t;
        P2.basis_evals(i, 0) = 1.0;
        P2.basis_evals(i, 1) = t;
    }
    ChebResult r2 = minimax_solve(P2);
    CHECK(r2.minimax_value == Catch::Approx(0.5).margin(1e-6));
    // best approximant is 1/2, so the minimax polynomial is t^2 - 1/2
    CHECK(std::abs(r2.coefficients(0) - cd(0.5)) < 1e-5);
    CHECK(std::abs(r2.coefficients(1)) < 1e-6);
}

TEST_CASE("lawson matches the grid oracle on random small instances", "[chebyshev]") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> Mdist(6, 64), kdist(0, 2);
    for (int inst = 0; inst < 25; ++inst) {
        int M = Mdist(rng), k = kdist(rng);
        MinimaxProblem P;
        P.target.resize(M);
        P.basis_evals.resize(M, k);
        for (int i = 0; i < M; ++i) {
            P.target(i) = cd(u(rng), u(rng));
            for (int j = 0; j < k; ++j) P.basis_evals(i, j) = cd(u(rng), u(rng));
        }
        ChebResult r = minimax_solve(P);
        double ref = oracle::brute_minimax(P.basis_evals, P.target);
        CHECK(std::abs(r.minimax_value - ref) < 1e-4);
        // recomputed-max invariant
        CHECK(r.minimax_value ==
              Catch::Approx(oracle::minimax_value(P.basis_evals, P.target, r.coefficients))
                  .margin(1e-14));
    }
}

TEST_CASE("monotonicity under nested correction spaces", "[chebyshev]") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int inst = 0; inst < 20; ++inst) {
        int M = 24;
        Eigen::MatrixXcd A(M, 3);
        Eigen::VectorXcd b(M);
        for (int i = 0; i < M; ++i) {
            b(i) = cd(u(rng), u(rng));
            for (int j = 0; j < 3; ++j) A(i, j) = cd(u(rng), u(rng));
        }
        MinimaxProblem small{b, A.leftCols(2), {}};
        MinimaxProblem big{b, A, {}};
        ChebResult rs = minimax_solve(small);
        Eigen::VectorXcd seed = Eigen::VectorXcd::Zero(3);
        seed.head(2) = rs.coefficients;
        ChebResult rb = minimax_solve(big, {}, {seed});
        CHECK(rb.minimax_value <= rs.minimax_value + 1e-12);
    }
}

TEST_CASE("tau_s on the line over the unit circle is 1", "[chebyshev]") {
    CurveRing L = CurveRing::build(line_ideal());
    CompactSet K = circle_sample(line_ideal(), 64);
    ChebContext ctx = build_cheb_context(L, K, 24);
    for (int s : {1, 2, 5, 10, 18, 24}) {
        ChebResult r = tau_s(ctx, 0, s);
        CHECK(r.normalized_constant == Catch::Approx(1.0).margin(0.02));
    }
}

TEST_CASE("t_s equals tau_s when there is a single direction", "[chebyshev]") {
    CurveRing L = CurveRing::build(line_ideal());
    CompactSet K = circle_sample(line_ideal(), 32);
    ChebContext ctx = build_cheb_context(L, K, 10);
    for (int s : {2, 6, 10}) {
        CHECK(t_s(ctx, 0, s).minimax_value == tau_s(ctx, 0, s).minimax_value);
    }
}

TEST_CASE("t_s never exceeds tau_s and both settle on the hyperbola", "[chebyshev]") {
    CurveRing H = CurveRing::build(hyperbola_ideal());
    CompactSet K = circle_sample(hyperbola_ideal(), 32);
    const int s_max = 16;
    ChebContext ctx = build_cheb_context(H, K, s_max);
    for (int dir = 0; dir < 2; ++dir) {
        std::vector<std::pair<int, double>> taus;
        double tau_top = 0.0, t_top = 0.0;
        for (int s = 1; s <= s_max; ++s) {
            ChebResult tv = tau_s(ctx, dir, s);
            ChebResult ts = t_s(ctx, dir, s);
            CHECK(ts.minimax_value <= tv.minimax_value * (1.0 + 1e-12));
            taus.emplace_back(s, tv.normalized_constant);
            if (s == s_max) {
                tau_top = tv.normalized_constant;
                t_top = ts.normalized_constant;
            }
        }
        LimitEstimate est = estimate_limit(taus);
        CHECK(est.slope_diagnostic < 0.05);
        CHECK(std::abs(tau_top - t_top) < 0.05 * tau_top);
    }
}

TEST_CASE("tau_Q identities: leading part and scaling", "[chebyshev]") {
    CurveRing H = CurveRing::build(hyperbola_ideal());
    CompactSet K = circle_sample(hyperbola_ideal(), 24);
    ChebContext ctx = build_cheb_context(H, K, 12);
    Poly Q = parse_poly("z2^2 + z1 - 3", 2);  // deg 2, non-homogeneous
    Poly Qhat = parse_poly("z2^2", 2);        // its leading homogeneous part
    GaussRational alpha(BigRational(-3, 2), BigRational(1, 3));
    for (int n : {1, 2, 3, 5}) {
        ChebResult a = tau_Q(ctx, Q, n);
        ChebResult b = tau_Q(ctx, Qhat, n);
        CHECK(std::abs(a.minimax_value - b.minimax_value) <=
              1e-10 * std::max(1.0, a.minimax_value));
        ChebResult c = tau_Q(ctx, Q.scaled(alpha), n);
        double factor = std::pow(std::abs(alpha.to_complex()), n);
        CHECK(std::abs(c.minimax_value - factor * a.minimax_value) <=
              1e-9 * std::max(1.0, factor * a.minimax_value));
        CHECK(c.normalized_constant ==
              Catch::Approx(std::pow(std::abs(alpha.to_complex()), 1.0 / Q.degree()) *
                            a.normalized_constant)
                  .epsilon(1e-7));
    }
}

TEST_CASE("z1-padding of the directional polynomial leaves tau_s unchanged", "[chebyshev]") {
    CurveRing H = CurveRing::build(hyperbola_ideal());
    CompactSet K = circle_sample(hyperbola_ideal(), 24);
    const int s = 9;
    ChebContext ctx = build_cheb_context(H, K, s);
    for (int dir = 0; dir < 2; ++dir) {
        ChebResult base = tau_s(ctx, dir, s);
        // pad v by one power of z1 (a degree a+1 representative) and rebuild
        // the target by hand: zeta1^{s-a-1} * (zeta1 * v(zeta))
        const DirectionalPoly& v = H.directional_poly(static_cast<size_t>(dir));
        MinimaxProblem P;
        P.target.resize(static_cast<Eigen::Index>(ctx.points.size()));
        for (size_t i = 0; i < ctx.points.size(); ++i) {
            const auto& z = ctx.points[i];
            cd padded = z[0] * H.eval_hom_form(v.degree_a, v.coeffs, z);
            P.target(static_cast<Eigen::Index>(i)) =
                std::pow(z[0], s - v.degree_a - 1) * padded;
        }
        Eigen::Index kc = ctx.count_below_degree(s);
        P.basis_evals = ctx.F.topRows(kc).transpose();
        ChebResult padded = minimax_solve(P);
        CHECK(std::abs(padded.minimax_value - base.minimax_value) <=
              1e-9 * std::max(1.0, base.minimax_value));
    }
}

TEST_CASE("sandwich consistency with the Q-Chebyshev ladder", "[chebyshev]") {
    // ||z1||^t * tau_s^s >= tau(K, v_lambda, n+1)^{(n+1) a} with
    // t = (n+1) a - s >= 1, the degree bookkeeping of the limit argument
    CurveRing H = CurveRing::build(hyperbola_ideal());
    CompactSet K = circle_sample(hyperbola_ideal(), 24);
    ChebContext ctx = build_cheb_context(H, K, 12);
    double z1norm = 0.0;
    for (const auto& p : K.points) z1norm = std::max(z1norm, std::abs(p[0]));
    const int a = std::max(H.a(), 1);
    for (int dir = 0; dir < 2; ++dir)
        for (int s : {3, 5, 8, 11}) {
            int n_plus_1 = s / a + 1;
            int t = n_plus_1 * a - s;
            REQUIRE(t >= 1);
            double lhs = std::pow(z1norm, t) * tau_s(ctx, dir, s).minimax_value;
            double rhs = tau_Q_directional(ctx, dir, n_plus_1).minimax_value;
            CHECK(lhs >= rhs - 1e-9 * std::max(1.0, rhs));
        }
}

TEST_CASE("estimate_limit summaries", "[chebyshev]") {
    std::vector<std::pair<int, double>> constant = {{1, 1.0}, {2, 1.0}, {3, 1.0}};
    LimitEstimate c = estimate_limit(constant);
    CHECK(c.last == 1.0);
    CHECK(c.tail_geomean == Catch::Approx(1.0));
    CHECK(c.slope_diagnostic == 0.0);

    std::vector<std::pair<int, double>> seq;
    double cval = 2.5;
    for (int s = 4; s <= 40; ++s) seq.emplace_back(s, cval * (1.0 + 1.0 / s));
    LimitEstimate e = estimate_limit(seq);
    CHECK(std::abs(e.tail_geomean - cval) / cval < 0.04);
    CHECK_THROWS_AS(estimate_limit(std::vector<std::pair<int, double>>{{1, 1.0}}), input_error);
}

TEST_CASE("transform_check: identity is exact, dilation scales", "[chebyshev]") {
    CurveRing L = CurveRing::build(line_ideal());
    CompactSet K = circle_sample(line_ideal(), 32);
    AffineMap id = AffineMap::identity(2);
    auto rows = transform_check(L, K, line_ideal(), id, 12);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rel_gap == 0.0);

    AffineMap twice = AffineMap::identity(2);
    twice.matrix[0][0] = GaussRational(BigRational(2));
    twice.matrix[1][1] = GaussRational(BigRational(2));
    const int s = 12;
    ChebContext ctx = build_cheb_context(L, K, s);
    double tau_k = tau_s(ctx, 0, s).normalized_constant;
    auto [ideal2, K2] = apply_affine(twice, K, line_ideal());
    CurveRing L2 = CurveRing::build(ideal2);
    ChebContext ctx2 = build_cheb_context(L2, K2, s);
    double tau_2k = tau_s(ctx2, 0, s).normalized_constant;
    CHECK(tau_2k == Catch::Approx(2.0 * tau_k).epsilon(0.03));
}

TEST_CASE("degree guards and rank rejection", "[chebyshev]") {
    MinimaxProblem P;
    P.target.resize(4);
    P.basis_evals.resize(4, 2);
    for (int i = 0; i < 4; ++i) {
        P.target(i) = cd(i, 1.0);
        P.basis_evals(i, 0) = 1.0;
        P.basis_evals(i, 1) = 2.0; // dependent column
    }
    CHECK_THROWS_AS(minimax_solve(P), numeric_error);

    CurveRing H = CurveRing::build(hyperbola_ideal());
    CompactSet K = circle_sample(hyperbola_ideal(), 12);
    ChebContext ctx = build_cheb_context(H, K, 8);
    CHECK_THROWS_AS(tau_s(ctx, 0, 0), input_error);   // below deg v_lambda
    CHECK_THROWS_AS(tau_s(ctx, 0, 61), input_error);  // above the degree cap
    CHECK_THROWS_AS(build_cheb_context(H, K, 0), input_error);
}
