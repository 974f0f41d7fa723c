#pragma once

#include <fstream>
#include <random>
#include <sstream>

#include "curvecap/curve.hpp"
#include "curvecap/parallel.hpp"

namespace curvecap {

struct SamplerOptions {
    double residual_tol = 1e-10; // normalized residual bound for accepted points
    double dedup_tol = 1e-9;     // minimal pairwise distance
    double cluster_tol = 1e-8;   // eigenvalue separation in the fiber solve
    std::uint64_t seed = 0x5eed0c0de;
    int max_retries = 5;
    int threads = 1;
    BuchbergerOptions buchberger;
};

// A validated finite sample of a compact subset of the curve.
struct CompactSet {
    std::vector<std::vector<cd>> points;
    std::string source;
    double residual_tol = 1e-10;

    size_t size() const { return points.size(); }
};

namespace detail {

// |g(zeta)| normalized by the term-magnitude sum, so the bound is meaningful
// at any point scale.
inline double normalized_residual(const Poly& g, std::span<const cd> zeta) {
    cd val = 0.0;
    double scale = 0.0;
    for (const auto& t : g.terms()) {
        cd m = t.coeff.to_complex();
        for (int k = 0; k < g.nvars(); ++k) {
            int e = t.mono.e[static_cast<size_t>(k)];
            if (e > 0) m *= std::pow(zeta[static_cast<size_t>(k)], e);
        }
        val += m;
        scale += std::abs(m);
    }
    return std::abs(val) / std::max(1.0, scale);
}

inline bool points_close(std::span<const cd> a, std::span<const cd> b, double tol) {
    double dist = 0.0;
    for (size_t k = 0; k < a.size(); ++k) dist = std::max(dist, std::abs(a[k] - b[k]));
    return dist <= tol;
}

// lexicographic with tolerance snapping so float jitter cannot flip the order
inline bool lex_point_less(const std::vector<cd>& a, const std::vector<cd>& b) {
    constexpr double tol = 1e-9;
    for (size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k].real() - b[k].real()) > tol) return a[k].real() < b[k].real();
        if (std::abs(a[k].imag() - b[k].imag()) > tol) return a[k].imag() < b[k].imag();
    }
    return false;
}

} // namespace detail

// Exact rational points on the circle |c| = r: images of a rational slope
// grid under the chord parametrization c = r((1-t^2) + 2ti)/(1+t^2), which
// lands exactly on the circle since (1-t^2)^2 + (2t)^2 = (1+t^2)^2. The
// first half uses slopes in (-1,1); the second half takes antipodes, which
// corresponds to the reciprocal slopes (t = infinity gives c = -r). Endpoint
// slopes +-1 are avoided so no sample hits +-ri.
inline GaussRational circle_point(const BigRational& r, const BigRational& t) {
    BigRational t2 = t * t;
    BigRational den = BigRational(1) + t2;
    BigRational re = (BigRational(1) - t2) / den * r;
    BigRational im = (t + t) / den * r;
    return GaussRational(re, im);
}

inline std::vector<GaussRational> rational_circle(int m, const BigRational& r) {
    if (m < 1) throw input_error("rational_circle: count must be positive");
    int m1 = (m + 1) / 2;
    int m2 = m - m1;
    std::vector<GaussRational> out;
    out.reserve(static_cast<size_t>(m));
    for (int k = 0; k < m1; ++k)
        out.push_back(circle_point(r, BigRational(2 * k + 1 - m1, m1)));
    for (int k = 0; k < m2; ++k)
        out.push_back(-circle_point(r, BigRational(2 * k + 1 - m1, m1)));
    return out;
}

// Points of V with z1 = c, solved by the eigenvalue method on the quotient
// algebra of the zero-dimensional fiber ideal.
inline std::vector<std::vector<cd>> fiber_points(const Ideal& ideal, const GaussRational& c,
                                                 const SamplerOptions& opts = {},
                                                 std::uint64_t salt = 0) {
    int N = ideal.nvars;
    std::vector<Poly> gens = ideal.generators;
    Poly slice = Poly::variable(N, 1) - Poly::constant(N, c);
    gens.push_back(slice);
    GroebnerBasis G = buchberger(Ideal(N, std::move(gens)), opts.buchberger);
    if (G.is_unit_ideal()) return {}; // empty fiber

    // zero-dimensionality: a pure power of every variable among the leading terms
    std::vector<int> bound(static_cast<size_t>(N), -1);
    for (const auto& m : G.lt_exponents())
        for (int k = 0; k < N; ++k)
            if (m.e[static_cast<size_t>(k)] > 0 && m.degree() == m.e[static_cast<size_t>(k)])
                bound[static_cast<size_t>(k)] = m.e[static_cast<size_t>(k)];
    for (int k = 0; k < N; ++k)
        if (bound[static_cast<size_t>(k)] < 0)
            throw input_error("fiber_points: fiber at z1 = " + c.str() +
                              " is positive-dimensional");

    int max_deg = 0;
    for (int k = 0; k < N; ++k) max_deg += bound[static_cast<size_t>(k)] - 1;
    std::vector<MultiIndex> basis;
    for (int s = 0; s <= max_deg; ++s)
        for (auto& m : quotient_basis_degree(G, s)) basis.push_back(std::move(m));
    const size_t D = basis.size();
    if (D == 0) return {};

    auto index_of = [&](const MultiIndex& m) -> size_t {
        for (size_t i = 0; i < D; ++i)
            if (basis[i] == m) return i;
        throw internal_error("fiber_points: monomial outside quotient basis");
    };

    std::vector<Eigen::MatrixXcd> Mz(static_cast<size_t>(N));
    for (int k = 1; k <= N; ++k) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(D),
                                                    static_cast<Eigen::Index>(D));
        for (size_t col = 0; col < D; ++col) {
            MultiIndex m = basis[col];
            m.e[static_cast<size_t>(k - 1)] += 1;
            Poly red = G.reduce(Poly::monomial(GaussRational(1), m));
            for (const auto& t : red.terms())
                M(static_cast<Eigen::Index>(index_of(t.mono)), static_cast<Eigen::Index>(col)) =
                    t.coeff.to_complex();
        }
        Mz[static_cast<size_t>(k - 1)] = std::move(M);
    }

    std::mt19937_64 rng(opts.seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    std::uniform_int_distribution<int> draw(1, 2027);
    Eigen::MatrixXcd vectors;
    bool separated = false;
    for (int attempt = 0; attempt < opts.max_retries && !separated; ++attempt) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(D),
                                                    static_cast<Eigen::Index>(D));
        for (int k = 0; k < N; ++k)
            M += (static_cast<double>(draw(rng)) / 2029.0) * Mz[static_cast<size_t>(k)];
        EigResult e = eig(CMatrix(M));
        separated = true;
        for (size_t p = 0; p < D && separated; ++p)
            for (size_t q = p + 1; q < D; ++q)
                if (std::abs(e.values[p] - e.values[q]) <=
                    opts.cluster_tol * std::max(1.0, M.norm())) {
                    separated = false;
                    break;
                }
        if (separated) vectors = e.vectors;
    }
    if (!separated)
        throw numeric_error("fiber_points: clustered eigenvalues at z1 = " + c.str() +
                            " after reweighting; possible multiple point of the fiber");

    std::vector<std::vector<cd>> pts;
    for (size_t col = 0; col < D; ++col) {
        Eigen::VectorXcd v = vectors.col(static_cast<Eigen::Index>(col));
        std::vector<cd> zeta(static_cast<size_t>(N));
        for (int k = 0; k < N; ++k) {
            const Eigen::MatrixXcd& A = Mz[static_cast<size_t>(k)];
            zeta[static_cast<size_t>(k)] = ((v.adjoint() * A * v)(0) / (v.adjoint() * v)(0));
        }
        double res = 0.0;
        for (const auto& g : ideal.generators)
            res = std::max(res, detail::normalized_residual(g, zeta));
        res = std::max(res, std::abs(zeta[0] - c.to_complex()) /
                                std::max(1.0, std::abs(c.to_complex())));
        if (res > opts.residual_tol)
            throw numeric_error("fiber_points: solution residual " + std::to_string(res) +
                                " at z1 = " + c.str() + " exceeds tolerance");
        pts.push_back(std::move(zeta));
    }
    std::sort(pts.begin(), pts.end(), detail::lex_point_less);
    return pts;
}

// Union of fibers over the base values, bounded by R_max in max-norm,
// deduplicated and validated. Fibers run in parallel; the merged order is
// base order, then lexicographic within a fiber.
inline CompactSet build_set(const Ideal& ideal, std::span<const GaussRational> base_values,
                            double r_max, const SamplerOptions& opts = {}) {
    std::vector<std::vector<std::vector<cd>>> slots(base_values.size());
    parallel_for(base_values.size(), opts.threads, [&](size_t i) {
        slots[i] = fiber_points(ideal, base_values[i], opts, /*salt=*/i);
    });
    CompactSet K;
    K.residual_tol = opts.residual_tol;
    K.source = "fibers over " + std::to_string(base_values.size()) + " base values";
    for (auto& fiber : slots)
        for (auto& p : fiber) {
            double norm = 0.0;
            for (const auto& z : p) norm = std::max(norm, std::abs(z));
            if (norm > r_max) continue;
            bool dup = false;
            for (const auto& q : K.points)
                if (detail::points_close(p, q, opts.dedup_tol)) {
                    dup = true;
                    break;
                }
            if (!dup) K.points.push_back(std::move(p));
        }
    if (K.points.empty())
        throw input_error("build_set: no points survived the bound R_max = " +
                          std::to_string(r_max));
    return K;
}

// Invertible exact affine map z -> Az + b.
struct AffineMap {
    std::vector<std::vector<GaussRational>> matrix; // N x N
    std::vector<GaussRational> shift;               // N

    int nvars() const { return static_cast<int>(shift.size()); }

    static AffineMap identity(int n) {
        AffineMap T;
        T.matrix.assign(static_cast<size_t>(n), std::vector<GaussRational>(static_cast<size_t>(n)));
        for (int k = 0; k < n; ++k) T.matrix[static_cast<size_t>(k)][static_cast<size_t>(k)] = GaussRational(1);
        T.shift.assign(static_cast<size_t>(n), GaussRational());
        return T;
    }

    // exact Gauss-Jordan inverse; throws input_error when singular
    AffineMap inverse() const {
        int n = nvars();
        std::vector<std::vector<GaussRational>> a = matrix;
        std::vector<std::vector<GaussRational>> inv =
            identity(n).matrix;
        for (int col = 0; col < n; ++col) {
            int pivot = -1;
            for (int r = col; r < n; ++r)
                if (!a[static_cast<size_t>(r)][static_cast<size_t>(col)].is_zero()) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) throw input_error("AffineMap: matrix is singular");
            std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(pivot)]);
            std::swap(inv[static_cast<size_t>(col)], inv[static_cast<size_t>(pivot)]);
            GaussRational p = a[static_cast<size_t>(col)][static_cast<size_t>(col)];
            for (int cc = 0; cc < n; ++cc) {
                a[static_cast<size_t>(col)][static_cast<size_t>(cc)] /= p;
                inv[static_cast<size_t>(col)][static_cast<size_t>(cc)] /= p;
            }
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                GaussRational f = a[static_cast<size_t>(r)][static_cast<size_t>(col)];
                if (f.is_zero()) continue;
                for (int cc = 0; cc < n; ++cc) {
                    a[static_cast<size_t>(r)][static_cast<size_t>(cc)] -=
                        f * a[static_cast<size_t>(col)][static_cast<size_t>(cc)];
                    inv[static_cast<size_t>(r)][static_cast<size_t>(cc)] -=
                        f * inv[static_cast<size_t>(col)][static_cast<size_t>(cc)];
                }
            }
        }
        AffineMap out;
        out.matrix = std::move(inv);
        // shift of the inverse map: -A^{-1} b
        out.shift.assign(static_cast<size_t>(n), GaussRational());
        for (int r = 0; r < n; ++r) {
            GaussRational acc;
            for (int ccol = 0; ccol < n; ++ccol)
                acc += out.matrix[static_cast<size_t>(r)][static_cast<size_t>(ccol)] *
                       shift[static_cast<size_t>(ccol)];
            out.shift[static_cast<size_t>(r)] = -acc;
        }
        return out;
    }

    std::vector<cd> apply(std::span<const cd> z) const {
        int n = nvars();
        std::vector<cd> out(static_cast<size_t>(n));
        for (int r = 0; r < n; ++r) {
            cd acc = shift[static_cast<size_t>(r)].to_complex();
            for (int ccol = 0; ccol < n; ++ccol)
                acc += matrix[static_cast<size_t>(r)][static_cast<size_t>(ccol)].to_complex() *
                       z[static_cast<size_t>(ccol)];
            out[static_cast<size_t>(r)] = acc;
        }
        return out;
    }

    // the k-th component as a polynomial (1-based k)
    Poly component_poly(int k) const {
        int n = nvars();
        Poly p = Poly::constant(n, shift[static_cast<size_t>(k - 1)]);
        for (int c = 0; c < n; ++c)
            p += Poly::variable(n, c + 1).scaled(matrix[static_cast<size_t>(k - 1)][static_cast<size_t>(c)]);
        return p;
    }

    // linear part of T1 evaluated at a direction (1, l2, ..., lN)
    cd t1_at_direction(std::span<const cd> coords) const {
        cd acc = 0.0;
        for (size_t c = 0; c < coords.size(); ++c)
            acc += matrix[0][c].to_complex() * coords[c];
        return acc;
    }
};

// Transformed ideal (exact substitution by T^{-1}) and transformed sample.
inline std::pair<Ideal, CompactSet> apply_affine(const AffineMap& T, const CompactSet& K,
                                                 const Ideal& ideal,
                                                 const SamplerOptions& opts = {}) {
    int n = ideal.nvars;
    if (T.nvars() != n) throw input_error("apply_affine: dimension mismatch");
    AffineMap Tinv = T.inverse();
    std::vector<Poly> subs;
    subs.reserve(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k) subs.push_back(Tinv.component_poly(k));
    std::vector<Poly> new_gens;
    for (const auto& g : ideal.generators) {
        Poly h = g.substitute(subs);
        if (h.is_zero()) throw internal_error("apply_affine: generator collapsed to zero");
        new_gens.push_back(std::move(h));
    }
    Ideal new_ideal(n, std::move(new_gens));

    CompactSet out;
    out.residual_tol = K.residual_tol;
    out.source = K.source + " under affine map";
    out.points.reserve(K.points.size());
    for (const auto& p : K.points) out.points.push_back(T.apply(p));
    for (const auto& p : out.points)
        for (const auto& g : new_ideal.generators)
            if (detail::normalized_residual(g, p) > opts.residual_tol * 100)
                throw numeric_error("apply_affine: transformed point fails residual check");
    return {std::move(new_ideal), std::move(out)};
}

// Point-list file format: one point per line, N complex numbers "re:im"
// separated by commas; '#' starts a comment.
inline CompactSet load_points(const std::string& path, const Ideal& ideal,
                              const SamplerOptions& opts = {}) {
    std::ifstream in(path);
    if (!in) throw input_error("load_points: cannot open '" + path + "'");
    CompactSet K;
    K.residual_tol = opts.residual_tol;
    K.source = "file " + path;
    std::string line;
    int lineno = 0;
    std::string bad;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        bool blank = true;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
        if (blank) continue;
        std::vector<cd> p;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            auto colon = cell.find(':');
            if (colon == std::string::npos)
                throw input_error("load_points: line " + std::to_string(lineno) +
                                  ": expected re:im");
            p.emplace_back(std::stod(cell.substr(0, colon)), std::stod(cell.substr(colon + 1)));
        }
        if (static_cast<int>(p.size()) != ideal.nvars)
            throw input_error("load_points: line " + std::to_string(lineno) + ": expected " +
                              std::to_string(ideal.nvars) + " coordinates");
        double res = 0.0;
        for (const auto& g : ideal.generators)
            res = std::max(res, detail::normalized_residual(g, p));
        if (res > opts.residual_tol) {
            bad += (bad.empty() ? "" : ", ") + std::to_string(lineno);
            continue;
        }
        K.points.push_back(std::move(p));
    }
    if (!bad.empty())
        throw input_error("load_points: rows off the curve (residual > " +
                          std::to_string(opts.residual_tol) + ") at lines: " + bad);
    if (K.points.empty()) throw input_error("load_points: no points in '" + path + "'");
    return K;
}

inline void save_points(const std::string& path, const CompactSet& K) {
    std::ofstream out(path);
    if (!out) throw input_error("save_points: cannot open '" + path + "'");
    out << "# " << K.source << "\n";
    out.precision(17);
    for (const auto& p : K.points) {
        for (size_t k = 0; k < p.size(); ++k) {
            if (k) out << ",";
            out << p[k].real() << ":" << p[k].imag();
        }
        out << "\n";
    }
}

} // namespace curvecap
