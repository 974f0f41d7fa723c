#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "curvecap/poly.hpp"

namespace curvecap {

struct Ideal {
    int nvars = 0;
    std::vector<Poly> generators;

    Ideal() = default;
    Ideal(int n, std::vector<Poly> gens) : nvars(n), generators(std::move(gens)) {
        for (const auto& g : generators) {
            if (g.is_zero()) throw input_error("Ideal: zero generator");
            if (g.nvars() != nvars) throw input_error("Ideal: generator arity mismatch");
        }
    }
    static Ideal parse(int nvars, const std::vector<std::string>& texts) {
        std::vector<Poly> gens;
        gens.reserve(texts.size());
        for (const auto& t : texts) gens.push_back(parse_poly(t, nvars));
        return Ideal(nvars, std::move(gens));
    }
};

struct BuchbergerOptions {
    long max_pairs = 200000; // abort budget for runaway inputs
    long max_basis = 2000;
};

// Reduced Groebner basis: monic elements, no term of any element divisible
// by another element's leading monomial, sorted ascending by leading
// monomial. Unique for the ideal, so usable as an exact fixture.
class GroebnerBasis {
public:
    GroebnerBasis(int nvars, std::vector<Poly> elems) : nvars_(nvars), elems_(std::move(elems)) {
        lt_.reserve(elems_.size());
        for (const auto& g : elems_) lt_.push_back(g.leading_monomial());
    }

    int nvars() const { return nvars_; }
    const std::vector<Poly>& elements() const { return elems_; }
    const std::vector<MultiIndex>& lt_exponents() const { return lt_; }

    bool is_unit_ideal() const {
        return elems_.size() == 1 && elems_.front().leading_monomial().degree() == 0;
    }

    bool in_lt_ideal(const MultiIndex& alpha) const {
        for (const auto& m : lt_)
            if (m.divides(alpha)) return true;
        return false;
    }

    // Normal form: the unique remainder of p modulo the basis, with no term
    // divisible by any leading monomial. deg(result) <= deg(p).
    Poly reduce(const Poly& p) const {
        if (!p.is_zero() && p.nvars() != nvars_)
            throw input_error("GroebnerBasis::reduce: arity mismatch");
        Poly work = p;
        std::vector<Term> remainder;
        while (!work.is_zero()) {
            const Term& lt = work.leading_term();
            const Poly* divisor = nullptr;
            for (size_t k = 0; k < elems_.size(); ++k) {
                if (lt_[k].divides(lt.mono)) {
                    divisor = &elems_[k];
                    break;
                }
            }
            if (divisor) {
                GaussRational factor = lt.coeff / divisor->leading_coeff();
                work -= divisor->shifted(factor, lt.mono - divisor->leading_monomial());
            } else {
                remainder.push_back(lt);
                work -= Poly::monomial(lt.coeff, lt.mono);
            }
        }
        return Poly::from_terms(nvars_, std::move(remainder));
    }

private:
    int nvars_;
    std::vector<Poly> elems_;
    std::vector<MultiIndex> lt_;
};

namespace detail {

inline Poly s_polynomial(const Poly& f, const Poly& g) {
    MultiIndex l = MultiIndex::lcm(f.leading_monomial(), g.leading_monomial());
    Poly a = f.shifted(f.leading_coeff().inverse(), l - f.leading_monomial());
    Poly b = g.shifted(g.leading_coeff().inverse(), l - g.leading_monomial());
    return a - b;
}

// division by an arbitrary (not reduced) list of divisors, first match wins
inline Poly reduce_by_list(const Poly& p, const std::vector<Poly>& divisors) {
    Poly work = p;
    std::vector<Term> remainder;
    while (!work.is_zero()) {
        const Term& lt = work.leading_term();
        const Poly* divisor = nullptr;
        for (const auto& g : divisors) {
            if (g.leading_monomial().divides(lt.mono)) {
                divisor = &g;
                break;
            }
        }
        if (divisor) {
            GaussRational factor = lt.coeff / divisor->leading_coeff();
            work -= divisor->shifted(factor, lt.mono - divisor->leading_monomial());
        } else {
            remainder.push_back(lt);
            work -= Poly::monomial(lt.coeff, lt.mono);
        }
    }
    return Poly::from_terms(p.nvars(), std::move(remainder));
}

} // namespace detail

// Buchberger's algorithm with the normal selection strategy (smallest lcm in
// grevlex, ties by insertion order) and the coprime and chain criteria,
// followed by inter-reduction to the unique reduced basis.
inline GroebnerBasis buchberger(const Ideal& ideal, const BuchbergerOptions& opts = {}) {
    std::vector<Poly> basis;
    for (const auto& g : ideal.generators)
        if (!g.is_zero()) basis.push_back(g);
    if (basis.empty()) throw input_error("buchberger: no nonzero generators");

    struct Pair {
        size_t i, j;
        MultiIndex lcm;
    };
    std::vector<Pair> pending;
    auto add_pairs_for = [&](size_t newest) {
        for (size_t i = 0; i < newest; ++i)
            pending.push_back({i, newest,
                               MultiIndex::lcm(basis[i].leading_monomial(),
                                               basis[newest].leading_monomial())});
    };
    for (size_t j = 1; j < basis.size(); ++j) add_pairs_for(j);

    auto pair_pending = [&](size_t a, size_t b) {
        for (const auto& p : pending)
            if ((p.i == a && p.j == b) || (p.i == b && p.j == a)) return true;
        return false;
    };

    long processed = 0;
    while (!pending.empty()) {
        if (++processed > opts.max_pairs)
            throw input_error("buchberger: pair budget exceeded (" +
                              std::to_string(opts.max_pairs) + "); input looks runaway");
        // normal strategy: smallest lcm, ties by position in the queue
        size_t best = 0;
        for (size_t k = 1; k < pending.size(); ++k)
            if (grevlex_less(pending[k].lcm, pending[best].lcm)) best = k;
        Pair pr = pending[best];
        pending.erase(pending.begin() + static_cast<long>(best));

        const MultiIndex& li = basis[pr.i].leading_monomial();
        const MultiIndex& lj = basis[pr.j].leading_monomial();
        // coprime criterion
        if (pr.lcm == li + lj) continue;
        // chain criterion
        bool chained = false;
        for (size_t k = 0; k < basis.size() && !chained; ++k) {
            if (k == pr.i || k == pr.j) continue;
            if (basis[k].leading_monomial().divides(pr.lcm) && !pair_pending(pr.i, k) &&
                !pair_pending(pr.j, k))
                chained = true;
        }
        if (chained) continue;

        Poly r = detail::reduce_by_list(detail::s_polynomial(basis[pr.i], basis[pr.j]), basis);
        if (!r.is_zero()) {
            basis.push_back(r.monic());
            if (static_cast<long>(basis.size()) > opts.max_basis)
                throw input_error("buchberger: basis budget exceeded");
            add_pairs_for(basis.size() - 1);
        }
    }

    // minimalize: keep an element only if no smaller leading monomial divides its own
    std::stable_sort(basis.begin(), basis.end(), [](const Poly& a, const Poly& b) {
        return grevlex_less(a.leading_monomial(), b.leading_monomial());
    });
    std::vector<Poly> minimal;
    for (const auto& g : basis) {
        bool redundant = false;
        for (const auto& kept : minimal)
            if (kept.leading_monomial().divides(g.leading_monomial())) {
                redundant = true;
                break;
            }
        if (!redundant) minimal.push_back(g.monic());
    }
    // inter-reduce tails
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t k = 0; k < minimal.size(); ++k) {
            std::vector<Poly> others;
            for (size_t l = 0; l < minimal.size(); ++l)
                if (l != k) others.push_back(minimal[l]);
            Poly r = detail::reduce_by_list(minimal[k], others);
            if (r.is_zero()) {
                minimal.erase(minimal.begin() + static_cast<long>(k));
                changed = true;
                break;
            }
            r = r.monic();
            if (r != minimal[k]) {
                minimal[k] = r;
                changed = true;
            }
        }
    }
    std::sort(minimal.begin(), minimal.end(), [](const Poly& a, const Poly& b) {
        return grevlex_less(a.leading_monomial(), b.leading_monomial());
    });
    return GroebnerBasis(ideal.nvars, std::move(minimal));
}

// All S-polynomials of the basis reduce to zero. Exact certificate that the
// basis really is a Groebner basis.
inline bool buchberger_certificate(const GroebnerBasis& G) {
    const auto& e = G.elements();
    for (size_t i = 0; i < e.size(); ++i)
        for (size_t j = i + 1; j < e.size(); ++j)
            if (!G.reduce(detail::s_polynomial(e[i], e[j])).is_zero()) return false;
    return true;
}

// ---------- quotient basis enumeration ----------

namespace detail {
inline void enumerate_rec(int nvars, int pos, int remaining, MultiIndex& cur,
                          std::vector<MultiIndex>& out) {
    if (pos == nvars - 1) {
        cur.e[static_cast<size_t>(pos)] = remaining;
        out.push_back(cur);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur.e[static_cast<size_t>(pos)] = e;
        enumerate_rec(nvars, pos + 1, remaining - e, cur, out);
    }
    cur.e[static_cast<size_t>(pos)] = 0;
}
} // namespace detail

// All monomials of total degree exactly n, ascending grevlex.
inline std::vector<MultiIndex> monomials_of_degree(int nvars, int n) {
    std::vector<MultiIndex> out;
    MultiIndex cur(nvars);
    detail::enumerate_rec(nvars, 0, n, cur, out);
    std::sort(out.begin(), out.end(), grevlex_less);
    return out;
}

// Standard monomials of degree exactly n (not in the leading-term ideal),
// ascending grevlex.
inline std::vector<MultiIndex> quotient_basis_degree(const GroebnerBasis& G, int n) {
    std::vector<MultiIndex> out;
    for (auto& m : monomials_of_degree(G.nvars(), n))
        if (!G.in_lt_ideal(m)) out.push_back(std::move(m));
    return out;
}

struct BasisCounts {
    long m_n = 0; // standard monomials of degree <= n
    long l_n = 0; // sum of their degrees
};

inline BasisCounts cumulative_counts(const GroebnerBasis& G, int n) {
    BasisCounts c;
    for (int s = 0; s <= n; ++s) {
        long cnt = static_cast<long>(quotient_basis_degree(G, s).size());
        c.m_n += cnt;
        c.l_n += cnt * s;
    }
    return c;
}

struct HilbertData {
    std::vector<long> dims; // dim of degree-<=s piece, s = 0..s_max
    long d = 0;             // stabilized slope
    long c = 0;             // intercept
    int s0 = 0;             // first degree where dims(s) = d*s + c holds onward
};

// Observe dim C[V]_{<=s} for s = 0..s_max and fit the eventual line.
// Throws input_error when the increments do not stabilize (not a curve /
// undetermined) or stabilize to zero (finite variety).
inline HilbertData hilbert_data(const GroebnerBasis& G, int s_max) {
    if (G.is_unit_ideal()) throw input_error("hilbert_data: unit ideal (empty variety)");
    HilbertData h;
    std::vector<long> counts;
    long cum = 0;
    for (int s = 0; s <= s_max; ++s) {
        counts.push_back(static_cast<long>(quotient_basis_degree(G, s).size()));
        cum += counts.back();
        h.dims.push_back(cum);
    }
    long d = counts.back();
    int stable_from = s_max;
    while (stable_from > 0 && counts[static_cast<size_t>(stable_from - 1)] == d) --stable_from;
    if (s_max - stable_from < 2)
        throw input_error("hilbert_data: increments not stabilized by degree " +
                          std::to_string(s_max) + "; raise s_max or input is not a curve");
    if (d == 0)
        throw input_error("hilbert_data: dimension increments stabilize to 0 (finite variety, "
                          "not a curve)");
    h.d = d;
    h.c = h.dims[static_cast<size_t>(stable_from)] - d * stable_from;
    int s0 = stable_from;
    while (s0 > 0 && h.dims[static_cast<size_t>(s0 - 1)] == d * (s0 - 1) + h.c) --s0;
    h.s0 = s0;
    return h;
}

// Element-wise homogenization of a reduced basis; a Groebner basis of the
// homogenized ideal, exposed for reporting the projective closure.
inline std::vector<HPoly> homogenize_basis(const GroebnerBasis& G) {
    std::vector<HPoly> out;
    out.reserve(G.elements().size());
    for (const auto& g : G.elements()) out.push_back(homogenize(g));
    return out;
}

} // namespace curvecap
