#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "curvecap/groebner.hpp"
#include "curvecap/numeric.hpp"

namespace curvecap {

struct CurveOptions {
    int s_max = 24;             // observation window for Hilbert data (grown as needed)
    double eigen_tol = 1e-9;    // eigenpair residual, relative to matrix norm
    double eig_sep_tol = 1e-7;  // minimal eigenvalue separation
    double vanish_tol = 1e-8;   // below this an evaluation counts as zero
    std::uint64_t seed = 0x5eed0c0de;
    int max_retries = 5;
    BuchbergerOptions buchberger;
};

// Exact d x d matrix of multiplication by z_j on the degree-n graded piece.
// Columns are indexed by the basis of degree n, rows by the basis of degree
// n+1, both ascending grevlex; by stability the two bases differ by a z1
// factor, which identifies the matrix with an endomorphism.
struct MulMatrix {
    int var = 0;          // j, 1-based
    int basis_degree = 0; // n
    std::vector<std::vector<GaussRational>> entries;

    CMatrix to_cmatrix() const {
        Eigen::Index d = static_cast<Eigen::Index>(entries.size());
        Eigen::MatrixXcd m(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c)
                m(r, c) = entries[static_cast<size_t>(r)][static_cast<size_t>(c)].to_complex();
        return CMatrix(std::move(m));
    }
    friend bool operator==(const MulMatrix& a, const MulMatrix& b) {
        return a.entries == b.entries;
    }
};

struct HypothesesReport {
    bool pure_powers = false;             // z_k^{a_k} in <LT(I)> for k >= 2, never for k = 1
    bool z1_identity = false;             // [[z1]] == I exactly
    bool simple_eigenvalues = false;      // every [[z_j]] has d simple eigenvalues
    bool coordinatewise_distinct = false; // infinity points differ in every coordinate
    std::string detail;                   // first failure, empty when all pass

    bool pass() const {
        return pure_powers && z1_identity && simple_eigenvalues && coordinatewise_distinct;
    }
};

// A point [0 : 1 : lambda_2 : ... : lambda_N] of the projective closure on
// the hyperplane at infinity, with its shared eigenvector and residuals.
struct InfinityPoint {
    std::vector<cd> coords;        // (1, lambda_2, ..., lambda_N)
    Eigen::VectorXcd eigvec;       // unit-norm simultaneous right eigenvector
    std::vector<double> residuals; // ||[[z_j]]v - lambda_j v|| for j = 2..N
};

// Homogeneous normal form of fixed degree, stored as the coefficient vector
// over the ascending-grevlex basis of that degree.
struct HomForm {
    int degree = 0;
    Eigen::VectorXcd coeffs;
};

// The directional polynomial v_lambda, represented at degree a with
// v_lambda(lambda) = 1 and v_lambda(mu) = 0 at every other direction.
struct DirectionalPoly {
    size_t dir_index = 0;
    int degree_a = 0;
    Eigen::VectorXcd coeffs; // over hom_basis(degree_a)
};

// One element of the degree-graded basis C of Section-5 type: either a plain
// standard monomial (degree < a) or v_{lambda_dir, degree}.
struct CBasisFn {
    int degree = 0;
    bool is_monomial = true;
    MultiIndex mono;  // when is_monomial
    int dir = -1;     // when !is_monomial
};

// The computational model of C[V] for an algebraic curve V: reduced Groebner
// basis, stabilized graded dimension d, per-degree standard-monomial bases,
// exact multiplication matrices, and the eigenstructure at infinity.
class CurveRing {
public:
    static CurveRing build(const Ideal& ideal, const CurveOptions& opts = {});

    int nvars() const { return nvars_; }
    long d() const { return d_; }
    int n0() const { return n0_; }
    int eig_degree() const { return neig_; }
    const GroebnerBasis& groebner() const { return G_; }
    const HilbertData& hilbert() const { return hilbert_; }
    const CurveOptions& options() const { return opts_; }

    // Standard monomials of degree n, ascending grevlex. Degrees beyond the
    // observation window use the verified z1-shift structure.
    std::vector<MultiIndex> hom_basis(int n) const {
        if (n < 0) throw input_error("hom_basis: negative degree");
        if (n < static_cast<int>(bases_.size())) return bases_[static_cast<size_t>(n)];
        std::vector<MultiIndex> out = bases_[static_cast<size_t>(bases_.size() - 1)];
        int shift = n - static_cast<int>(bases_.size() - 1);
        for (auto& m : out) m.e[0] += shift;
        return out;
    }

    Poly star(const Poly& p, const Poly& q) const { return G_.reduce(p * q); }

    // Leading homogeneous part of the star product, zeroed when cancellation
    // drops the degree.
    Poly hat_star(const Poly& p, const Poly& q) const {
        if (p.is_zero() || q.is_zero()) return Poly::zero(nvars_);
        Poly s = star(p, q);
        if (s.is_zero() || s.degree() != p.degree() + q.degree()) return Poly::zero(nvars_);
        return s.leading_homogeneous_part();
    }

    const MulMatrix& mul_matrix(int j) const {
        if (j < 1 || j > nvars_) throw input_error("mul_matrix: variable index out of range");
        return mul_[static_cast<size_t>(j - 1)];
    }

    // recompute at an explicit degree n >= n0 (the cached matrix uses
    // max(n0,1)); exact equality across degrees is part of the contract
    MulMatrix mul_matrix_at(int j, int n) const {
        if (j < 1 || j > nvars_) throw input_error("mul_matrix_at: variable index out of range");
        if (n < n0_) throw input_error("mul_matrix_at: degree below stabilization");
        return compute_mul_matrix(j, n);
    }

    const HypothesesReport& hypotheses() const { return hyp_; }

    const std::vector<InfinityPoint>& infinity_points() const {
        require_directions();
        return infinity_;
    }

    // Eigenvector polynomial for the j-th coordinate of direction dir,
    // normalized to value 1 at the direction. Under simple eigenvalues this
    // is the shared eigenvector independently of j; the j argument selects
    // which residual was certified.
    HomForm eigenvector_poly(size_t dir, int j) const;

    const DirectionalPoly& directional_poly(size_t dir) const {
        require_directions();
        return vlambda_[dir];
    }
    const std::vector<DirectionalPoly>& directional_polys() const {
        require_directions();
        return vlambda_;
    }

    // v_{lambda,s}(zeta) = zeta_1^{s-a} v_lambda(zeta), evaluated pointwise.
    cd eval_directional_at(size_t dir, int s, std::span<const cd> point) const {
        const DirectionalPoly& v = directional_poly(dir);
        if (s < v.degree_a) throw input_error("eval_directional_at: s below degree of v_lambda");
        cd val = eval_hom_form(v.degree_a, v.coeffs, point);
        return std::pow(point[0], s - v.degree_a) * val;
    }

    cd eval_hom_form(int degree, const Eigen::VectorXcd& coeffs,
                     std::span<const cd> point) const {
        auto basis = hom_basis(degree);
        cd acc = 0.0;
        for (size_t k = 0; k < basis.size(); ++k) {
            cd m = 1.0;
            for (int v = 0; v < nvars_; ++v) {
                int e = basis[k].e[static_cast<size_t>(v)];
                if (e > 0) m *= std::pow(point[static_cast<size_t>(v)], e);
            }
            acc += coeffs(static_cast<Eigen::Index>(k)) * m;
        }
        return acc;
    }

    // Evaluation at a direction (1, lambda_2, ..., lambda_N).
    cd eval_hom_form_at_direction(const HomForm& f, size_t dir) const {
        require_directions();
        return eval_hom_form(f.degree, f.coeffs, infinity_[dir].coords);
    }

    // Degree of every directional polynomial as represented (= n0).
    int a() const { return n0_; }

    // Ordered basis of C[V]_{<=n}: standard monomials of degree < a, then
    // for each degree s = a..n the directional functions in direction order.
    std::vector<CBasisFn> c_basis(int n) const;

    // Standard monomials of degree <= n as basis functions, ascending.
    std::vector<CBasisFn> monomial_basis(int n) const;

    BasisCounts counts(int n) const { return cumulative_counts(G_, n); }

    // Complex hat-star of homogeneous coefficient forms, via the exact
    // structure constants of the graded multiplication.
    HomForm hat_star_form(const HomForm& p, const HomForm& q) const;

    cd eval_basis_fn(const CBasisFn& fn, std::span<const cd> point) const {
        if (fn.is_monomial) {
            cd m = 1.0;
            for (int v = 0; v < nvars_; ++v) {
                int e = fn.mono.e[static_cast<size_t>(v)];
                if (e > 0) m *= std::pow(point[static_cast<size_t>(v)], e);
            }
            return m;
        }
        return eval_directional_at(static_cast<size_t>(fn.dir), fn.degree, point);
    }

private:
    void require_directions() const {
        if (!hyp_.pass())
            throw hypothesis_error("curve fails structural hypotheses: " + hyp_.detail);
    }

    MulMatrix compute_mul_matrix(int j, int n) const;
    void compute_directions();

    int nvars_ = 0;
    GroebnerBasis G_{0, {}};
    HilbertData hilbert_;
    long d_ = 0;
    int n0_ = 0;
    int neig_ = 1; // degree used for matrices and eigenvector polynomials
    std::vector<std::vector<MultiIndex>> bases_;
    std::vector<MulMatrix> mul_;
    HypothesesReport hyp_;
    std::vector<InfinityPoint> infinity_;
    std::vector<DirectionalPoly> vlambda_;
    CurveOptions opts_;

    CurveRing() = default;
};

inline MulMatrix CurveRing::compute_mul_matrix(int j, int n) const {
    auto src = (n < static_cast<int>(bases_.size())) ? bases_[static_cast<size_t>(n)]
                                                     : hom_basis(n);
    auto dst = hom_basis(n + 1);
    size_t d = src.size();
    MulMatrix M;
    M.var = j;
    M.basis_degree = n;
    M.entries.assign(d, std::vector<GaussRational>(d));
    for (size_t c = 0; c < d; ++c) {
        MultiIndex m = src[c];
        m.e[static_cast<size_t>(j - 1)] += 1;
        Poly red = G_.reduce(Poly::monomial(GaussRational(1), m));
        for (const auto& t : red.terms()) {
            if (t.mono.degree() != n + 1) continue;
            auto it = std::find(dst.begin(), dst.end(), t.mono);
            if (it == dst.end())
                throw internal_error("mul_matrix: reduced term outside the graded basis");
            M.entries[static_cast<size_t>(it - dst.begin())][c] = t.coeff;
        }
    }
    return M;
}

inline CurveRing CurveRing::build(const Ideal& ideal, const CurveOptions& opts) {
    CurveRing R;
    R.opts_ = opts;
    R.nvars_ = ideal.nvars;
    R.G_ = buchberger(ideal, opts.buchberger);
    if (R.G_.is_unit_ideal())
        throw input_error("ideal is the unit ideal: the variety is empty");

    // Grow the observation window past the leading-term degrees and the
    // bound on z1-free standard monomials so the z1-shift structure, once
    // observed, provably persists.
    int lt_deg = 0;
    for (const auto& m : R.G_.lt_exponents()) lt_deg = std::max(lt_deg, m.degree());
    int pure_bound = 0;
    for (int k = 2; k <= R.nvars_; ++k) {
        for (const auto& m : R.G_.lt_exponents()) {
            bool pure = m.e[static_cast<size_t>(k - 1)] > 0 && m.degree() == m.e[static_cast<size_t>(k - 1)];
            if (pure) {
                pure_bound += m.e[static_cast<size_t>(k - 1)] - 1;
                break;
            }
        }
    }
    int s_eff = std::max(opts.s_max, lt_deg + pure_bound + 3);

    R.hilbert_ = hilbert_data(R.G_, s_eff);
    R.d_ = R.hilbert_.d;
    for (int s = 0; s <= s_eff; ++s) R.bases_.push_back(quotient_basis_degree(R.G_, s));

    // n0: smallest degree from which the graded piece has dimension d and
    // each next basis is the z1 shift of the previous one.
    auto shifted = [](std::vector<MultiIndex> b) {
        for (auto& m : b) m.e[0] += 1;
        return b;
    };
    int n0 = -1;
    for (int n = 0; n < s_eff; ++n) {
        if (static_cast<long>(R.bases_[static_cast<size_t>(n)].size()) != R.d_) continue;
        bool ok = true;
        for (int m = n; m < s_eff && ok; ++m)
            ok = (R.bases_[static_cast<size_t>(m + 1)] == shifted(R.bases_[static_cast<size_t>(m)]));
        if (ok) {
            n0 = n;
            break;
        }
    }
    if (n0 < 0)
        throw input_error("graded basis shape does not stabilize by degree " +
                          std::to_string(s_eff) + "; not a curve in the supported sense");
    R.n0_ = n0;
    R.neig_ = std::max(n0, 1);

    for (int j = 1; j <= R.nvars_; ++j) {
        MulMatrix M = R.compute_mul_matrix(j, R.neig_);
        MulMatrix M2 = R.compute_mul_matrix(j, R.neig_ + 1);
        if (!(M == M2))
            throw internal_error("mul_matrix for z" + std::to_string(j) +
                                 " differs between degrees " + std::to_string(R.neig_) + " and " +
                                 std::to_string(R.neig_ + 1));
        R.mul_.push_back(std::move(M));
    }

    // hypothesis (a): pure powers of z_k (k >= 2) in the LT ideal, never z1
    HypothesesReport& H = R.hyp_;
    H.pure_powers = true;
    for (int k = 1; k <= R.nvars_ && H.pure_powers; ++k) {
        bool found = false;
        for (const auto& m : R.G_.lt_exponents())
            if (m.e[static_cast<size_t>(k - 1)] > 0 &&
                m.degree() == m.e[static_cast<size_t>(k - 1)]) {
                found = true;
                break;
            }
        if (k == 1 && found) {
            H.pure_powers = false;
            H.detail = "a pure power of z1 lies in the leading-term ideal";
        }
        if (k >= 2 && !found) {
            H.pure_powers = false;
            H.detail = "no pure power of z" + std::to_string(k) + " in the leading-term ideal";
        }
    }

    // hypothesis (b): [[z1]] is exactly the identity
    H.z1_identity = true;
    const auto& Z1 = R.mul_.front().entries;
    for (size_t r = 0; r < Z1.size() && H.z1_identity; ++r)
        for (size_t c = 0; c < Z1.size(); ++c) {
            GaussRational want = (r == c) ? GaussRational(1) : GaussRational(0);
            if (Z1[r][c] != want) {
                H.z1_identity = false;
                if (H.detail.empty()) H.detail = "[[z1]] is not the identity matrix";
                break;
            }
        }

    // hypothesis (c): all eigenvalues of each [[z_j]] simple
    H.simple_eigenvalues = true;
    for (int j = 2; j <= R.nvars_ && H.simple_eigenvalues; ++j) {
        EigResult e = eig(R.mul_[static_cast<size_t>(j - 1)].to_cmatrix());
        for (size_t p = 0; p < e.values.size() && H.simple_eigenvalues; ++p)
            for (size_t q = p + 1; q < e.values.size(); ++q)
                if (std::abs(e.values[p] - e.values[q]) <= opts.eig_sep_tol) {
                    H.simple_eigenvalues = false;
                    if (H.detail.empty())
                        H.detail = "[[z" + std::to_string(j) + "]] has a repeated eigenvalue near " +
                                   std::to_string(e.values[p].real());
                    break;
                }
    }

    if (H.pure_powers && H.z1_identity && H.simple_eigenvalues) {
        R.compute_directions();
    } else {
        H.coordinatewise_distinct = false;
        if (H.detail.empty()) H.detail = "earlier hypothesis failed";
    }
    return R;
}

inline void CurveRing::compute_directions() {
    const size_t d = static_cast<size_t>(d_);
    std::vector<Eigen::MatrixXcd> Mz;
    for (int j = 2; j <= nvars_; ++j)
        Mz.push_back(mul_[static_cast<size_t>(j - 1)].to_cmatrix().mat());

    std::mt19937_64 rng(opts_.seed);
    std::uniform_int_distribution<int> draw(1, 2027);
    bool separated = false;
    Eigen::MatrixXcd vectors;
    for (int attempt = 0; attempt < opts_.max_retries && !separated; ++attempt) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                    static_cast<Eigen::Index>(d));
        for (auto& A : Mz) M += (static_cast<double>(draw(rng)) / 2029.0) * A;
        EigResult e = eig(CMatrix(M));
        separated = true;
        for (size_t p = 0; p < e.values.size() && separated; ++p)
            for (size_t q = p + 1; q < e.values.size(); ++q)
                if (std::abs(e.values[p] - e.values[q]) <= opts_.eig_sep_tol) {
                    separated = false;
                    break;
                }
        if (separated) vectors = e.vectors;
    }
    if (!separated) {
        hyp_.simple_eigenvalues = false;
        hyp_.detail = "combined multiplication matrix has clustered eigenvalues after " +
                      std::to_string(opts_.max_retries) + " reweighting attempts";
        hyp_.coordinatewise_distinct = false;
        return;
    }

    std::vector<InfinityPoint> pts;
    for (size_t k = 0; k < d; ++k) {
        InfinityPoint P;
        Eigen::VectorXcd v = vectors.col(static_cast<Eigen::Index>(k));
        v.normalize();
        P.eigvec = v;
        P.coords.assign(static_cast<size_t>(nvars_), cd(0.0));
        P.coords[0] = 1.0;
        for (int j = 2; j <= nvars_; ++j) {
            const Eigen::MatrixXcd& A = Mz[static_cast<size_t>(j - 2)];
            cd lambda = (v.adjoint() * A * v)(0) / (v.adjoint() * v)(0);
            double res = (A * v - lambda * v).norm();
            P.coords[static_cast<size_t>(j - 1)] = lambda;
            P.residuals.push_back(res);
            if (res > opts_.eigen_tol * std::max(1.0, A.norm())) {
                hyp_.simple_eigenvalues = false;
                hyp_.detail = "shared eigenvector residual " + std::to_string(res) +
                              " for [[z" + std::to_string(j) + "]] exceeds tolerance";
                hyp_.coordinatewise_distinct = false;
                return;
            }
        }
        pts.push_back(std::move(P));
    }

    // fixed direction order: ascending by (Re l2, Im l2, Re l3, ...)
    std::sort(pts.begin(), pts.end(), [](const InfinityPoint& a, const InfinityPoint& b) {
        for (size_t k = 1; k < a.coords.size(); ++k) {
            if (a.coords[k].real() != b.coords[k].real())
                return a.coords[k].real() < b.coords[k].real();
            if (a.coords[k].imag() != b.coords[k].imag())
                return a.coords[k].imag() < b.coords[k].imag();
        }
        return false;
    });

    // hypothesis (d): per-coordinate distinctness
    hyp_.coordinatewise_distinct = true;
    for (int j = 2; j <= nvars_ && hyp_.coordinatewise_distinct; ++j)
        for (size_t p = 0; p < pts.size() && hyp_.coordinatewise_distinct; ++p)
            for (size_t q = p + 1; q < pts.size(); ++q) {
                cd a = pts[p].coords[static_cast<size_t>(j - 1)];
                cd b = pts[q].coords[static_cast<size_t>(j - 1)];
                if (std::abs(a - b) <= opts_.eig_sep_tol) {
                    hyp_.coordinatewise_distinct = false;
                    hyp_.detail = "two points at infinity share coordinate z" + std::to_string(j);
                    break;
                }
            }
    if (!hyp_.coordinatewise_distinct) return;
    infinity_ = std::move(pts);

    // directional polynomials: hat-star chain of the eigenvector polynomials
    // for j = 2..N, re-represented at degree a = n0 via the z1-shift.
    for (size_t dir = 0; dir < infinity_.size(); ++dir) {
        HomForm acc = eigenvector_poly(dir, 2);
        for (int j = 3; j <= nvars_; ++j) acc = hat_star_form(acc, eigenvector_poly(dir, j));
        if (acc.coeffs.norm() < opts_.vanish_tol)
            throw internal_error("directional polynomial collapsed to zero in hat-star chain");
        DirectionalPoly v;
        v.dir_index = dir;
        v.degree_a = n0_;
        v.coeffs = acc.coeffs; // same vector over hom_basis(n0) by the shift identification
        cd val = eval_hom_form(n0_, v.coeffs, infinity_[dir].coords);
        if (std::abs(val) < opts_.vanish_tol)
            throw internal_error("directional polynomial nearly vanishes at its own direction");
        v.coeffs /= val;
        vlambda_.push_back(std::move(v));
    }
}

inline HomForm CurveRing::eigenvector_poly(size_t dir, int j) const {
    require_directions();
    if (j < 2 || j > nvars_) throw input_error("eigenvector_poly: j out of range");
    if (dir >= infinity_.size()) throw input_error("eigenvector_poly: direction out of range");
    HomForm f;
    f.degree = neig_;
    f.coeffs = infinity_[dir].eigvec;
    cd val = eval_hom_form(f.degree, f.coeffs, infinity_[dir].coords);
    if (std::abs(val) < opts_.vanish_tol)
        throw hypothesis_error("eigenvector polynomial vanishes at its own direction; "
                               "normalization impossible");
    f.coeffs /= val;
    return f;
}

inline HomForm CurveRing::hat_star_form(const HomForm& p, const HomForm& q) const {
    auto bp = hom_basis(p.degree);
    auto bq = hom_basis(q.degree);
    int dout = p.degree + q.degree;
    auto bout = hom_basis(dout);
    HomForm out;
    out.degree = dout;
    out.coeffs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(bout.size()));
    for (size_t a = 0; a < bp.size(); ++a) {
        cd ca = p.coeffs(static_cast<Eigen::Index>(a));
        if (ca == cd(0.0)) continue;
        for (size_t b = 0; b < bq.size(); ++b) {
            cd cb = q.coeffs(static_cast<Eigen::Index>(b));
            if (cb == cd(0.0)) continue;
            Poly red = G_.reduce(Poly::monomial(GaussRational(1), bp[a] + bq[b]));
            for (const auto& t : red.terms()) {
                if (t.mono.degree() != dout) continue;
                auto it = std::find(bout.begin(), bout.end(), t.mono);
                if (it == bout.end())
                    throw internal_error("hat_star_form: term outside graded basis");
                out.coeffs(static_cast<Eigen::Index>(it - bout.begin())) +=
                    ca * cb * t.coeff.to_complex();
            }
        }
    }
    return out;
}

inline std::vector<CBasisFn> CurveRing::c_basis(int n) const {
    require_directions();
    std::vector<CBasisFn> out;
    int a = n0_;
    for (int s = 0; s < a && s <= n; ++s)
        for (auto& m : hom_basis(s)) {
            CBasisFn f;
            f.degree = s;
            f.is_monomial = true;
            f.mono = m;
            out.push_back(std::move(f));
        }
    for (int s = a; s <= n; ++s)
        for (size_t dir = 0; dir < infinity_.size(); ++dir) {
            CBasisFn f;
            f.degree = s;
            f.is_monomial = false;
            f.dir = static_cast<int>(dir);
            out.push_back(std::move(f));
        }
    return out;
}

inline std::vector<CBasisFn> CurveRing::monomial_basis(int n) const {
    std::vector<CBasisFn> out;
    for (int s = 0; s <= n; ++s)
        for (auto& m : hom_basis(s)) {
            CBasisFn f;
            f.degree = s;
            f.is_monomial = true;
            f.mono = m;
            out.push_back(std::move(f));
        }
    return out;
}

// Functions-by-points evaluation matrix (rows = functions, cols = points).
// Directional values are cached per (direction, point).
inline Eigen::MatrixXcd eval_functions_at_points(const CurveRing& R,
                                                 const std::vector<CBasisFn>& fns,
                                                 const std::vector<std::vector<cd>>& points) {
    const size_t m = points.size();
    bool need_dirs = false;
    for (const auto& f : fns)
        if (!f.is_monomial) need_dirs = true;
    Eigen::MatrixXcd vcache;
    if (need_dirs) {
        const auto& dirs = R.directional_polys();
        vcache.resize(static_cast<Eigen::Index>(dirs.size()), static_cast<Eigen::Index>(m));
        for (size_t dctr = 0; dctr < dirs.size(); ++dctr)
            for (size_t p = 0; p < m; ++p)
                vcache(static_cast<Eigen::Index>(dctr), static_cast<Eigen::Index>(p)) =
                    R.eval_hom_form(dirs[dctr].degree_a, dirs[dctr].coeffs, points[p]);
    }
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(fns.size()), static_cast<Eigen::Index>(m));
    for (size_t k = 0; k < fns.size(); ++k) {
        const CBasisFn& f = fns[k];
        for (size_t p = 0; p < m; ++p) {
            cd val;
            if (f.is_monomial) {
                val = 1.0;
                for (int v = 0; v < R.nvars(); ++v) {
                    int e = f.mono.e[static_cast<size_t>(v)];
                    if (e > 0) val *= std::pow(points[p][static_cast<size_t>(v)], e);
                }
            } else {
                int a = R.directional_poly(static_cast<size_t>(f.dir)).degree_a;
                val = std::pow(points[p][0], f.degree - a) *
                      vcache(static_cast<Eigen::Index>(f.dir), static_cast<Eigen::Index>(p));
            }
            out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(p)) = val;
        }
    }
    return out;
}

} // namespace curvecap
