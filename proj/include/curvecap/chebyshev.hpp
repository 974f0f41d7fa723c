#pragma once

#include "curvecap/curve.hpp"
#include "curvecap/parallel.hpp"
#include "curvecap/sampler.hpp"

namespace curvecap {

struct LawsonOptions {
    double tol = 1e-10;         // relative change of the max residual
    int max_iters = 500;
    double weight_floor = 1e-300;
    int s_cap = 60;             // refuse degrees beyond this
    bool polish = true;         // smoothed-Newton refinement after the Lawson loop
};

// Discrete complex minimax instance: minimize over coefficients c the value
// max_i |target_i - (basis_evals c)_i|.
struct MinimaxProblem {
    Eigen::VectorXcd target;      // length M
    Eigen::MatrixXcd basis_evals; // M x k
    std::vector<std::string> labels;
};

struct ChebResult {
    Eigen::VectorXcd coefficients;
    double minimax_value = 0.0;   // recomputed max residual, never the solver's word
    int iterations = 0;
    bool converged = false;
    int s_or_n = 0;
    double normalized_constant = 0.0;
};

namespace detail {
inline double max_residual(const MinimaxProblem& P, const Eigen::VectorXcd& c) {
    Eigen::VectorXcd r = P.target;
    if (P.basis_evals.cols() > 0) r -= P.basis_evals * c;
    double m = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) m = std::max(m, std::abs(r(i)));
    return m;
}

// Refine a near-optimal point by damped Newton on the softmax smoothing
// mu * log sum_i exp(|r_i|^2 / mu), staged down in mu. The smoothed value
// brackets max |r_i|^2 within mu*log(M), so the final stage pins the
// minimax point to roughly sqrt(mu) ~ 1e-8 relative. Lawson alone stalls at
// ~1e-3 on some complex instances; this closes the gap at the cost of a few
// dozen extra least-squares-sized solves.
inline void newton_polish(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                          Eigen::VectorXcd& c, double& best, Eigen::VectorXcd& best_c,
                          bool* settled) {
    const Eigen::Index M = A.rows(), k = A.cols();
    const Eigen::Index n = 2 * k;
    if (k == 0 || best <= 1e-300) return;
    Eigen::MatrixXcd J(M, n);
    for (Eigen::Index i = 0; i < M; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            J(i, 2 * j) = -A(i, j);
            J(i, 2 * j + 1) = cd(0, -1) * A(i, j);
        }
    double mu = best * best * 1e-2;
    for (int stage = 0; stage < 18; ++stage, mu *= 0.2) {
        auto gval = [&](const Eigen::VectorXcd& cc) {
            Eigen::VectorXcd rr = b - A * cc;
            double qm = 0.0;
            for (Eigen::Index i = 0; i < M; ++i) qm = std::max(qm, std::norm(rr(i)));
            double s = 0.0;
            for (Eigen::Index i = 0; i < M; ++i) s += std::exp((std::norm(rr(i)) - qm) / mu);
            return qm + mu * std::log(s);
        };
        for (int it = 0; it < 50; ++it) {
            Eigen::VectorXcd r = b - A * c;
            double qmax = 0.0;
            for (Eigen::Index i = 0; i < M; ++i) qmax = std::max(qmax, std::norm(r(i)));
            Eigen::VectorXd p(M);
            double ps = 0.0;
            for (Eigen::Index i = 0; i < M; ++i) {
                p(i) = std::exp((std::norm(r(i)) - qmax) / mu);
                ps += p(i);
            }
            p /= ps;
            Eigen::MatrixXd G = 2.0 * (r.conjugate().asDiagonal() * J).real();
            Eigen::VectorXd grad = G.transpose() * p;
            Eigen::MatrixXd H = 2.0 * (J.adjoint() * p.asDiagonal() * J).real();
            H.noalias() += (G.transpose() * p.asDiagonal() * G - grad * grad.transpose()) / mu;
            H.diagonal().array() += 1e-13 * std::max(qmax, 1e-30);
            Eigen::VectorXd dx = H.ldlt().solve(-grad);
            if (!dx.allFinite()) return;
            double g0 = gval(c);
            double gd = grad.dot(dx);
            double step = 1.0;
            Eigen::VectorXcd cn = c;
            for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
                cn = c;
                for (Eigen::Index j = 0; j < k; ++j)
                    cn(j) += cd(step * dx(2 * j), step * dx(2 * j + 1));
                if (gval(cn) <= g0 + 1e-4 * step * gd) break;
            }
            double move = (cn - c).norm();
            c = cn;
            double v = max_residual({b, A, {}}, c);
            if (v < best) {
                best = v;
                best_c = c;
            }
            if (move < 1e-15 * (1.0 + c.norm())) {
                if (settled && stage >= 12) *settled = true;
                break;
            }
        }
    }
    if (settled) *settled = true;
}
} // namespace detail

// Lawson iteratively reweighted least squares. Returns the best iterate seen
// (by recomputed max residual); optional candidate coefficient vectors
// compete with the iterates, which lets callers seed nested solves.
inline ChebResult minimax_solve(const MinimaxProblem& P, const LawsonOptions& opts = {},
                                const std::vector<Eigen::VectorXcd>& candidates = {}) {
    const Eigen::Index M = P.target.size();
    const Eigen::Index k = P.basis_evals.cols();
    if (M == 0) throw input_error("minimax_solve: empty point set");
    if (P.basis_evals.rows() != M) throw input_error("minimax_solve: shape mismatch");
    if (M < k) throw input_error("minimax_solve: fewer points than correction functions");

    ChebResult out;
    if (k == 0) {
        out.coefficients = Eigen::VectorXcd(0);
        out.minimax_value = detail::max_residual(P, out.coefficients);
        out.converged = true;
        return out;
    }

    double sigma = 0.0;
    for (Eigen::Index i = 0; i < M; ++i) sigma = std::max(sigma, std::abs(P.target(i)));
    if (sigma == 0.0) sigma = 1.0;
    Eigen::VectorXcd b = P.target / sigma;

    std::vector<double> w(static_cast<size_t>(M), 1.0 / static_cast<double>(M));
    std::vector<cd> bspan(static_cast<size_t>(M));
    for (Eigen::Index i = 0; i < M; ++i) bspan[static_cast<size_t>(i)] = b(i);

    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXcd best_c = Eigen::VectorXcd::Zero(k);
    double prev = std::numeric_limits<double>::infinity();
    bool converged = false;
    int it = 0;
    CMatrix A(P.basis_evals);
    for (it = 1; it <= opts.max_iters; ++it) {
        Eigen::VectorXcd c = weighted_lstsq(A, bspan, w);
        Eigen::VectorXcd r = b - P.basis_evals * c;
        double cur = 0.0;
        for (Eigen::Index i = 0; i < M; ++i) cur = std::max(cur, std::abs(r(i)));
        if (cur < best) {
            best = cur;
            best_c = c;
        }
        if (cur == 0.0 || std::abs(cur - prev) <= opts.tol * std::max(cur, 1e-300)) {
            converged = true;
            break;
        }
        prev = cur;
        double sum = 0.0;
        for (Eigen::Index i = 0; i < M; ++i) {
            size_t s = static_cast<size_t>(i);
            w[s] = std::max(w[s] * std::abs(r(i)), opts.weight_floor);
            sum += w[s];
        }
        for (auto& x : w) x /= sum;
    }

    if (opts.polish) {
        bool settled = false;
        Eigen::VectorXcd work = best_c;
        detail::newton_polish(P.basis_evals, b, work, best, best_c, &settled);
        converged = converged || settled;
    }

    out.coefficients = sigma * best_c;
    out.iterations = it;
    out.converged = converged;
    for (const auto& cand : candidates) {
        if (cand.size() != k) throw input_error("minimax_solve: candidate size mismatch");
        double v = detail::max_residual(P, cand) / sigma;
        if (v < best) {
            best = v;
            out.coefficients = cand;
        }
    }
    out.minimax_value = detail::max_residual(P, out.coefficients);
    return out;
}

// Evaluations of the degree-graded basis on a fixed sample, shared by all
// Chebyshev solves on that sample.
struct ChebContext {
    const CurveRing* R = nullptr;
    std::vector<std::vector<cd>> points;
    std::vector<CBasisFn> fns;  // c_basis up to degree s_max, degree-ascending
    Eigen::MatrixXcd F;         // fns x points
    int s_max = 0;

    Eigen::Index count_below_degree(int s) const {
        Eigen::Index n = 0;
        while (n < static_cast<Eigen::Index>(fns.size()) &&
               fns[static_cast<size_t>(n)].degree < s)
            ++n;
        return n;
    }
    Eigen::Index index_of_directional(int s, int dir) const {
        for (size_t i = 0; i < fns.size(); ++i)
            if (!fns[i].is_monomial && fns[i].degree == s && fns[i].dir == dir)
                return static_cast<Eigen::Index>(i);
        throw internal_error("ChebContext: directional function not present");
    }
};

inline ChebContext build_cheb_context(const CurveRing& R, const CompactSet& K, int s_max) {
    if (s_max < std::max(R.a(), 1))
        throw input_error("cheb context: s_max must be at least " +
                          std::to_string(std::max(R.a(), 1)) + " (degree of v_lambda)");
    ChebContext ctx;
    ctx.R = &R;
    ctx.points = K.points;
    ctx.fns = R.c_basis(s_max);
    ctx.F = eval_functions_at_points(R, ctx.fns, ctx.points);
    ctx.s_max = s_max;
    return ctx;
}

// s-th order directional Chebyshev constant for direction dir:
// minimize || v_{lambda,s} + q ||_K over deg(q) < s.
inline ChebResult tau_s(const ChebContext& ctx, int dir, int s, const LawsonOptions& opts = {}) {
    if (s > opts.s_cap) throw input_error("tau_s: degree above cap");
    int a = ctx.R->a();
    if (s < std::max(a, 1)) throw input_error("tau_s: s must be at least " + std::to_string(std::max(a, 1)));
    if (s > ctx.s_max) throw input_error("tau_s: context built only up to s_max");
    MinimaxProblem P;
    Eigen::Index kc = ctx.count_below_degree(s);
    P.target = ctx.F.row(ctx.index_of_directional(s, dir)).transpose();
    P.basis_evals = ctx.F.topRows(kc).transpose();
    ChebResult r = minimax_solve(P, opts);
    r.s_or_n = s;
    r.normalized_constant = std::pow(r.minimax_value, 1.0 / static_cast<double>(s));
    return r;
}

// Like tau_s, with the other directions' v_{mu,s} added to the correction
// space. The extended solve competes with the tau_s optimum embedded at
// zero, so t_s <= tau_s holds for the returned values.
inline ChebResult t_s(const ChebContext& ctx, int dir, int s, const LawsonOptions& opts = {}) {
    ChebResult restricted = tau_s(ctx, dir, s, opts);
    long d = ctx.R->d();
    if (d == 1) {
        restricted.s_or_n = s;
        return restricted;
    }
    Eigen::Index kc = ctx.count_below_degree(s);
    MinimaxProblem P;
    P.target = ctx.F.row(ctx.index_of_directional(s, dir)).transpose();
    P.basis_evals.resize(static_cast<Eigen::Index>(ctx.points.size()), kc + d - 1);
    P.basis_evals.leftCols(kc) = ctx.F.topRows(kc).transpose();
    Eigen::Index col = kc;
    for (int mu = 0; mu < d; ++mu) {
        if (mu == dir) continue;
        P.basis_evals.col(col++) = ctx.F.row(ctx.index_of_directional(s, mu)).transpose();
    }
    Eigen::VectorXcd seed = Eigen::VectorXcd::Zero(kc + d - 1);
    seed.head(kc) = restricted.coefficients;
    ChebResult r = minimax_solve(P, opts, {seed});
    r.s_or_n = s;
    r.normalized_constant = std::pow(r.minimax_value, 1.0 / static_cast<double>(s));
    return r;
}

// Q-Chebyshev constant at order n from pointwise evaluations of Q on K:
// minimize || Q^n + r ||_K over deg(r) < n deg(Q). On V the class is
// Q(zeta)^n plus the span of the basis functions below that degree.
inline ChebResult tau_Q_values(const ChebContext& ctx, const Eigen::VectorXcd& q_values,
                               int degQ, int n, const LawsonOptions& opts = {}) {
    if (n < 1) throw input_error("tau_Q: n must be positive");
    if (degQ < 1) throw input_error("tau_Q: deg(Q) must be positive");
    if (q_values.size() != static_cast<Eigen::Index>(ctx.points.size()))
        throw input_error("tau_Q: evaluation count mismatch");
    int total = n * degQ;
    if (total > ctx.s_max)
        throw input_error("tau_Q: n*deg(Q) exceeds the context degree window");
    MinimaxProblem P;
    P.target.resize(q_values.size());
    for (Eigen::Index i = 0; i < q_values.size(); ++i) P.target(i) = std::pow(q_values(i), n);
    Eigen::Index kc = ctx.count_below_degree(total);
    P.basis_evals = ctx.F.topRows(kc).transpose();
    ChebResult r = minimax_solve(P, opts);
    r.s_or_n = n;
    r.normalized_constant = std::pow(r.minimax_value, 1.0 / static_cast<double>(total));
    return r;
}

inline ChebResult tau_Q(const ChebContext& ctx, const Poly& Q, int n,
                        const LawsonOptions& opts = {}) {
    if (Q.is_zero()) throw input_error("tau_Q: zero polynomial");
    Eigen::VectorXcd qv(static_cast<Eigen::Index>(ctx.points.size()));
    for (size_t i = 0; i < ctx.points.size(); ++i)
        qv(static_cast<Eigen::Index>(i)) = Q.evaluate(ctx.points[i]);
    return tau_Q_values(ctx, qv, Q.degree(), n, opts);
}

// tau(K, v_lambda, n): the Q-Chebyshev constant of the directional
// polynomial itself.
inline ChebResult tau_Q_directional(const ChebContext& ctx, int dir, int n,
                                    const LawsonOptions& opts = {}) {
    const DirectionalPoly& v = ctx.R->directional_poly(static_cast<size_t>(dir));
    int degQ = std::max(v.degree_a, 1);
    Eigen::VectorXcd qv(static_cast<Eigen::Index>(ctx.points.size()));
    for (size_t i = 0; i < ctx.points.size(); ++i)
        qv(static_cast<Eigen::Index>(i)) = ctx.R->eval_directional_at(
            static_cast<size_t>(dir), degQ, ctx.points[i]);
    return tau_Q_values(ctx, qv, degQ, n, opts);
}

struct LimitEstimate {
    double last = 0.0;
    double tail_geomean = 0.0;
    double slope_diagnostic = 0.0; // max relative successive difference over the tail
};

inline LimitEstimate estimate_limit(std::span<const std::pair<int, double>> seq) {
    if (seq.size() < 3) throw input_error("estimate_limit: need at least 3 terms");
    LimitEstimate est;
    est.last = seq.back().second;
    size_t tail = (seq.size() + 3) / 4; // ceil(25%)
    if (tail < 2) tail = 2;
    double acc = 0.0;
    for (size_t i = seq.size() - tail; i < seq.size(); ++i) {
        if (seq[i].second <= 0.0) throw input_error("estimate_limit: nonpositive term");
        acc += std::log(seq[i].second);
    }
    est.tail_geomean = std::exp(acc / static_cast<double>(tail));
    for (size_t i = seq.size() - tail; i + 1 < seq.size(); ++i) {
        double rel = std::abs(seq[i + 1].second - seq[i].second) /
                     std::max(seq[i].second, 1e-300);
        est.slope_diagnostic = std::max(est.slope_diagnostic, rel);
    }
    return est;
}

struct ChebSweepRow {
    int dir = 0;
    int s = 0;
    std::string family; // "tau" or "t"
    double raw_value = 0.0;
    double normalized = 0.0;
    int iterations = 0;
    bool converged = true;
};

// tau_s and t_s for every direction and s in [s_min, s_max], solved in
// parallel, merged in (direction, s, family) order.
inline std::vector<ChebSweepRow> cheb_sweep(const ChebContext& ctx, int s_min, int s_max,
                                            const LawsonOptions& opts = {}, int threads = 1,
                                            bool with_t = true) {
    long d = ctx.R->d();
    s_min = std::max(s_min, std::max(ctx.R->a(), 1));
    if (s_max < s_min) throw input_error("cheb_sweep: empty degree range");
    struct Job {
        int dir, s;
    };
    std::vector<Job> jobs;
    for (int dir = 0; dir < d; ++dir)
        for (int s = s_min; s <= s_max; ++s) jobs.push_back({dir, s});
    std::vector<std::vector<ChebSweepRow>> slots(jobs.size());
    parallel_for(jobs.size(), threads, [&](size_t i) {
        const Job& j = jobs[i];
        ChebResult tau = tau_s(ctx, j.dir, j.s, opts);
        slots[i].push_back({j.dir, j.s, "tau", tau.minimax_value, tau.normalized_constant,
                            tau.iterations, tau.converged});
        if (with_t) {
            ChebResult t = t_s(ctx, j.dir, j.s, opts);
            slots[i].push_back({j.dir, j.s, "t", t.minimax_value, t.normalized_constant,
                                t.iterations, t.converged});
        }
    });
    std::vector<ChebSweepRow> rows;
    for (auto& s : slots)
        for (auto& r : s) rows.push_back(std::move(r));
    return rows;
}

// Lookup helper over sweep rows.
inline double sweep_value(const std::vector<ChebSweepRow>& rows, int dir, int s,
                          const std::string& family, bool normalized) {
    for (const auto& r : rows)
        if (r.dir == dir && r.s == s && r.family == family)
            return normalized ? r.normalized : r.raw_value;
    throw internal_error("sweep_value: row not found");
}

struct TransformCheckRow {
    int dir = 0;                 // direction index on the source curve
    cd eta2;                     // second coordinate of the source direction
    double tau_source = 0.0;     // tau_s(K, eta)
    double tau_transformed = 0.0;// tau_s(T(K), T(eta))
    double rel_gap = 0.0;
};

// Directional Chebyshev constants are invariant under admissible affine maps
// in the limit; this computes both sides at one finite s on bijective
// samples and reports the relative gaps.
inline std::vector<TransformCheckRow> transform_check(const CurveRing& R, const CompactSet& K,
                                                      const Ideal& ideal, const AffineMap& T,
                                                      int s, const LawsonOptions& lopts = {},
                                                      const SamplerOptions& sopts = {},
                                                      int threads = 1) {
    const auto& dirs = R.infinity_points();
    for (const auto& p : dirs)
        if (std::abs(T.t1_at_direction(p.coords)) < R.options().vanish_tol)
            throw input_error("transform_check: T1 vanishes at a direction of V");

    auto [ideal2, K2] = apply_affine(T, K, ideal, sopts);
    CurveRing R2 = CurveRing::build(ideal2, R.options());
    const auto& dirs2 = R2.infinity_points();
    if (dirs2.size() != dirs.size())
        throw internal_error("transform_check: direction count changed under T");

    ChebContext ctx1 = build_cheb_context(R, K, s);
    ChebContext ctx2 = build_cheb_context(R2, K2, s);

    std::vector<TransformCheckRow> rows(dirs.size());
    parallel_for(dirs.size(), threads, [&](size_t i) {
        cd t1 = T.t1_at_direction(dirs[i].coords);
        // image direction: lambda_j = T_j(eta) / T_1(eta) (linear parts)
        std::vector<cd> img(dirs[i].coords.size());
        img[0] = 1.0;
        for (int j = 2; j <= R.nvars(); ++j) {
            cd tj = 0.0;
            for (size_t c = 0; c < dirs[i].coords.size(); ++c)
                tj += T.matrix[static_cast<size_t>(j - 1)][c].to_complex() * dirs[i].coords[c];
            img[static_cast<size_t>(j - 1)] = tj / t1;
        }
        size_t match = dirs2.size();
        double best = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < dirs2.size(); ++k) {
            double dist = 0.0;
            for (size_t c = 1; c < img.size(); ++c)
                dist = std::max(dist, std::abs(img[c] - dirs2[k].coords[c]));
            if (dist < best) {
                best = dist;
                match = k;
            }
        }
        if (best > 1e-6)
            throw internal_error("transform_check: image direction not found on T(V)");
        TransformCheckRow row;
        row.dir = static_cast<int>(i);
        row.eta2 = dirs[i].coords[1];
        row.tau_source = tau_s(ctx1, static_cast<int>(i), s, lopts).normalized_constant;
        row.tau_transformed = tau_s(ctx2, static_cast<int>(match), s, lopts).normalized_constant;
        row.rel_gap = std::abs(row.tau_source - row.tau_transformed) /
                      std::max({row.tau_source, row.tau_transformed, 1e-300});
        rows[i] = row;
    });
    return rows;
}

} // namespace curvecap
