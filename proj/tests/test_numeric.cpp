#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "curvecap/numeric.hpp"

using namespace curvecap;

namespace {
Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd A(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) A(r, c) = cd(u(rng), u(rng));
    return A;
}
} // namespace

TEST_CASE("eig on fixed matrices", "[numeric]") {
    Eigen::MatrixXcd swap(2, 2);
    swap << 0, 1, 1, 0;
    EigResult e = eig(CMatrix(swap));
    std::vector<double> vals = {e.values[0].real(), e.values[1].real()};
    std::sort(vals.begin(), vals.end());
    CHECK(vals[0] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(vals[1] == Catch::Approx(1.0).margin(1e-12));

    EigResult id = eig(CMatrix(Eigen::MatrixXcd::Identity(4, 4)));
    for (auto v : id.values) CHECK(std::abs(v - cd(1.0)) < 1e-12);
}

TEST_CASE("eig residual contract on random matrices", "[numeric]") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 25; ++t) {
        int n = 2 + static_cast<int>(rng() % 7);
        CMatrix A(random_matrix(rng, n));
        EigResult e = eig(A); // the contract bound is asserted inside
        for (double r : e.residuals) CHECK(r <= 1e-10 * A.mat().norm() * n);
        for (Eigen::Index k = 0; k < e.vectors.cols(); ++k)
            CHECK(e.vectors.col(k).norm() == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("CMatrix rejects non-finite entries", "[numeric]") {
    Eigen::MatrixXcd bad(1, 1);
    bad(0, 0) = cd(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(CMatrix(bad), numeric_error);
}

TEST_CASE("weighted least squares", "[numeric]") {
    Eigen::MatrixXcd A(2, 1);
    A << 1, 1;
    std::vector<cd> b = {cd(0.0), cd(2.0)};
    std::vector<double> w1 = {1.0, 1.0};
    Eigen::VectorXcd c = weighted_lstsq(CMatrix(A), b, w1);
    CHECK(std::abs(c(0) - cd(1.0)) < 1e-14);
    std::vector<double> w2 = {3.0, 1.0};
    c = weighted_lstsq(CMatrix(A), b, w2);
    CHECK(std::abs(c(0) - cd(0.5)) < 1e-14);

    // b in range(A) -> zero residual
    std::mt19937_64 rng(5);
    Eigen::MatrixXcd M = random_matrix(rng, 6);
    Eigen::MatrixXcd A2 = M.leftCols(3);
    Eigen::VectorXcd x(3);
    x << cd(1, 2), cd(-3, 0), cd(0, 1);
    Eigen::VectorXcd bb = A2 * x;
    std::vector<cd> bv(6);
    for (int i = 0; i < 6; ++i) bv[static_cast<size_t>(i)] = bb(i);
    std::vector<double> w(6, 0.25);
    Eigen::VectorXcd sol = weighted_lstsq(CMatrix(A2), bv, w);
    CHECK((A2 * sol - bb).norm() < 1e-12);

    // residual orthogonality contract A^H W r ~ 0
    std::vector<cd> b3(6);
    for (int i = 0; i < 6; ++i) b3[static_cast<size_t>(i)] = cd(std::sin(i + 1.0), std::cos(i * 2.0));
    Eigen::VectorXcd c3 = weighted_lstsq(CMatrix(A2), b3, w);
    Eigen::VectorXcd r3(6);
    for (int i = 0; i < 6; ++i) r3(i) = b3[static_cast<size_t>(i)];
    r3 -= A2 * c3;
    Eigen::VectorXcd g = A2.adjoint() * (Eigen::Map<Eigen::VectorXd>(w.data(), 6).asDiagonal() * r3);
    CHECK(g.norm() <= 1e-8 * A2.norm() * r3.norm() + 1e-12);

    // rank deficiency names a column
    Eigen::MatrixXcd R(3, 2);
    R << 1, 2, 1, 2, 1, 2;
    std::vector<cd> br = {cd(1.0), cd(0.0), cd(0.0)};
    std::vector<double> wr = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(weighted_lstsq(CMatrix(R), br, wr), numeric_error);
}

TEST_CASE("logdet basics", "[numeric]") {
    // 2x2 Vandermonde [[1,1],[z1,z2]]
    cd z1(0.3, 0.4), z2(-1.1, 0.2);
    Eigen::MatrixXcd V(2, 2);
    V << 1, 1, z1, z2;
    LogDet ld = logdet(CMatrix(V));
    CHECK_FALSE(ld.zero);
    CHECK(ld.log_abs == Catch::Approx(std::log(std::abs(z2 - z1))).margin(1e-12));

    LogDet idd = logdet(CMatrix(Eigen::MatrixXcd::Identity(5, 5)));
    CHECK(idd.log_abs == Catch::Approx(0.0).margin(1e-15));
    CHECK(std::abs(idd.phase - cd(1.0)) < 1e-15);

    Eigen::MatrixXcd S(2, 2);
    S << 1, 1, z1, z1; // repeated column
    CHECK(logdet(CMatrix(S)).zero);
}

TEST_CASE("logdet is additive over products (randomized)", "[numeric]") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        int n = 2 + static_cast<int>(rng() % 6);
        Eigen::MatrixXcd A = random_matrix(rng, n) + 3.0 * Eigen::MatrixXcd::Identity(n, n);
        Eigen::MatrixXcd B = random_matrix(rng, n) + 3.0 * Eigen::MatrixXcd::Identity(n, n);
        LogDet la = logdet(CMatrix(A)), lb = logdet(CMatrix(B)), lab = logdet(CMatrix((A * B).eval()));
        CHECK(lab.log_abs == Catch::Approx(la.log_abs + lb.log_abs).margin(1e-8 * n));
        CHECK(std::abs(lab.phase - la.phase * lb.phase) < 1e-8 * n);
    }
}
