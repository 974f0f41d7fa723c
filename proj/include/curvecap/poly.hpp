#pragma once

#include <algorithm>
#include <cassert>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "curvecap/rational.hpp"

namespace curvecap {

// Exponent vector of a monomial in a fixed number of variables.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(int nvars) : e(static_cast<size_t>(nvars), 0) {}
    explicit MultiIndex(std::vector<int> exps) : e(std::move(exps)) {}

    int nvars() const { return static_cast<int>(e.size()); }
    int degree() const { return std::accumulate(e.begin(), e.end(), 0); }

    bool divides(const MultiIndex& other) const {
        if (e.size() != other.e.size()) return false;
        for (size_t k = 0; k < e.size(); ++k)
            if (e[k] > other.e[k]) return false;
        return true;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        MultiIndex r(*this);
        for (size_t k = 0; k < e.size(); ++k) r.e[k] += o.e[k];
        return r;
    }
    // componentwise difference; caller guarantees divisibility
    MultiIndex operator-(const MultiIndex& o) const {
        MultiIndex r(*this);
        for (size_t k = 0; k < e.size(); ++k) r.e[k] -= o.e[k];
        return r;
    }
    static MultiIndex lcm(const MultiIndex& a, const MultiIndex& b) {
        MultiIndex r(a);
        for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = std::max(a.e[k], b.e[k]);
        return r;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e == b.e; }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a.e == b.e); }
};

enum class Ordering { Less, Equal, Greater };

// The grevlex variant used throughout this library. Graded by total degree;
// at equal degree, the monomial with the LARGER exponent at the first index
// where the two differ is the SMALLER one. This makes z1 the least
// significant variable: pure z1 powers are the smallest monomials of each
// degree. Note this is not the common convention with z1 most significant;
// results will not line up term-for-term with off-the-shelf CAS output.
inline Ordering grevlex_cmp(const MultiIndex& a, const MultiIndex& b) {
    if (a.e.size() != b.e.size())
        throw input_error("grevlex_cmp: multi-index length mismatch");
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db ? Ordering::Less : Ordering::Greater;
    for (size_t k = 0; k < a.e.size(); ++k) {
        if (a.e[k] != b.e[k])
            return a.e[k] > b.e[k] ? Ordering::Less : Ordering::Greater;
    }
    return Ordering::Equal;
}

inline bool grevlex_less(const MultiIndex& a, const MultiIndex& b) {
    return grevlex_cmp(a, b) == Ordering::Less;
}

struct Term {
    GaussRational coeff;
    MultiIndex mono;
};

// Sparse multivariate polynomial over Q(i). Terms are kept strictly
// descending in grevlex, with no zero coefficients and no duplicates.
class Poly {
public:
    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly zero(int nvars) { return Poly(nvars); }
    static Poly constant(int nvars, GaussRational c) {
        Poly p(nvars);
        if (!c.is_zero()) p.terms_.push_back({std::move(c), MultiIndex(nvars)});
        return p;
    }
    // var is 1-based: variable(nvars, 1) is z1
    static Poly variable(int nvars, int var) {
        if (var < 1 || var > nvars) throw input_error("Poly::variable: index out of range");
        MultiIndex m(nvars);
        m.e[static_cast<size_t>(var - 1)] = 1;
        Poly p(nvars);
        p.terms_.push_back({GaussRational(1), std::move(m)});
        return p;
    }
    static Poly monomial(GaussRational c, MultiIndex m) {
        Poly p(m.nvars());
        if (!c.is_zero()) p.terms_.push_back({std::move(c), std::move(m)});
        return p;
    }
    // terms in any order, duplicates allowed; normalizes
    static Poly from_terms(int nvars, std::vector<Term> terms);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    int degree() const {
        if (is_zero()) throw input_error("Poly::degree: zero polynomial");
        return terms_.front().mono.degree();
    }

    const Term& leading_term() const {
        if (is_zero()) throw input_error("Poly::leading_term: zero polynomial");
        return terms_.front();
    }
    const MultiIndex& leading_monomial() const { return leading_term().mono; }
    const GaussRational& leading_coeff() const { return leading_term().coeff; }

    bool is_homogeneous() const {
        if (is_zero()) return true;
        int d = terms_.front().mono.degree();
        for (const auto& t : terms_)
            if (t.mono.degree() != d) return false;
        return true;
    }

    // Sum of the terms of maximal total degree.
    Poly leading_homogeneous_part() const {
        if (is_zero()) throw input_error("leading_homogeneous_part: zero polynomial");
        return homogeneous_part(degree());
    }

    Poly homogeneous_part(int d) const {
        Poly r(nvars_);
        for (const auto& t : terms_)
            if (t.mono.degree() == d) r.terms_.push_back(t);
        return r;
    }

    Poly operator-() const {
        Poly r(nvars_);
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({-t.coeff, t.mono});
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
    friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

    Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
    Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }

    friend Poly operator*(const Poly& a, const Poly& b);

    Poly scaled(const GaussRational& c) const {
        Poly r(nvars_);
        if (c.is_zero()) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.coeff * c, t.mono});
        return r;
    }

    // multiply by c * z^m
    Poly shifted(const GaussRational& c, const MultiIndex& m) const {
        Poly r(nvars_);
        if (c.is_zero()) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.coeff * c, t.mono + m});
        return r;
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return scaled(leading_coeff().inverse());
    }

    Poly pow(int k) const {
        Poly r = Poly::constant(nvars_, GaussRational(1));
        for (int i = 0; i < k; ++i) r = r * (*this);
        return r;
    }

    GaussRational evaluate_exact(std::span<const GaussRational> point) const;
    std::complex<double> evaluate(std::span<const std::complex<double>> point) const;

    // Pad lower-degree terms with powers of a new first variable z0 so every
    // term reaches the total degree; result has nvars+1 variables.
    Poly homogenize() const;
    // Substitute 1 for variable j (0-based over the current variable list)
    // and drop it; inverse of homogenize at j = 0.
    Poly dehomogenize_at(int j) const;

    // Substitute each variable z_i by the given polynomial (1-based index
    // i -> subs[i-1]); all subs share one variable count.
    Poly substitute(const std::vector<Poly>& subs) const;

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
        for (size_t k = 0; k < a.terms_.size(); ++k)
            if (a.terms_[k].mono != b.terms_[k].mono || a.terms_[k].coeff != b.terms_[k].coeff)
                return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Exact text form; parse(str()) reproduces the polynomial. Variables are
    // named z{first_var_index}, z{first_var_index+1}, ...
    std::string str(int first_var_index = 1) const;

    bool check_invariants() const {
        for (const auto& t : terms_)
            if (t.coeff.is_zero() || t.mono.nvars() != nvars_) return false;
        for (size_t k = 0; k + 1 < terms_.size(); ++k)
            if (grevlex_cmp(terms_[k].mono, terms_[k + 1].mono) != Ordering::Greater) return false;
        return true;
    }

private:
    static Poly merge(const Poly& a, const Poly& b, bool subtract);
    int nvars_;
    std::vector<Term> terms_; // strictly descending grevlex
};

inline Poly Poly::from_terms(int nvars, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) {
        return grevlex_cmp(x.mono, y.mono) == Ordering::Greater;
    });
    Poly p(nvars);
    for (auto& t : terms) {
        if (t.mono.nvars() != nvars) throw input_error("Poly::from_terms: wrong arity");
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono)
            p.terms_.back().coeff += t.coeff;
        else
            p.terms_.push_back(std::move(t));
    }
    std::erase_if(p.terms_, [](const Term& t) { return t.coeff.is_zero(); });
    return p;
}

inline Poly Poly::merge(const Poly& a, const Poly& b, bool subtract) {
    if (a.nvars_ != b.nvars_ && !a.is_zero() && !b.is_zero())
        throw input_error("Poly: arity mismatch");
    Poly r(a.is_zero() ? b.nvars_ : a.nvars_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
        Ordering o = grevlex_cmp(a.terms_[i].mono, b.terms_[j].mono);
        if (o == Ordering::Greater) {
            r.terms_.push_back(a.terms_[i++]);
        } else if (o == Ordering::Less) {
            const Term& t = b.terms_[j++];
            r.terms_.push_back({subtract ? -t.coeff : t.coeff, t.mono});
        } else {
            GaussRational c = subtract ? a.terms_[i].coeff - b.terms_[j].coeff
                                       : a.terms_[i].coeff + b.terms_[j].coeff;
            if (!c.is_zero()) r.terms_.push_back({std::move(c), a.terms_[i].mono});
            ++i;
            ++j;
        }
    }
    for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) {
        const Term& t = b.terms_[j];
        r.terms_.push_back({subtract ? -t.coeff : t.coeff, t.mono});
    }
    return r;
}

inline Poly operator*(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_ && !a.is_zero() && !b.is_zero())
        throw input_error("Poly: arity mismatch");
    Poly r(a.is_zero() ? b.nvars_ : a.nvars_);
    if (a.is_zero() || b.is_zero()) return r;
    std::vector<Term> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_)
            prod.push_back({ta.coeff * tb.coeff, ta.mono + tb.mono});
    return Poly::from_terms(a.nvars_, std::move(prod));
}

inline GaussRational Poly::evaluate_exact(std::span<const GaussRational> point) const {
    if (static_cast<int>(point.size()) != nvars_)
        throw input_error("Poly::evaluate_exact: point arity mismatch");
    GaussRational acc;
    for (const auto& t : terms_) {
        GaussRational m = t.coeff;
        for (int k = 0; k < nvars_; ++k)
            for (int e = 0; e < t.mono.e[static_cast<size_t>(k)]; ++e) m *= point[static_cast<size_t>(k)];
        acc += m;
    }
    return acc;
}

inline std::complex<double> Poly::evaluate(std::span<const std::complex<double>> point) const {
    if (static_cast<int>(point.size()) != nvars_)
        throw input_error("Poly::evaluate: point arity mismatch");
    // direct term summation; each term via repeated squaring on the powers
    std::complex<double> acc = 0.0;
    for (const auto& t : terms_) {
        std::complex<double> m = t.coeff.to_complex();
        for (int k = 0; k < nvars_; ++k) {
            int e = t.mono.e[static_cast<size_t>(k)];
            if (e > 0) m *= std::pow(point[static_cast<size_t>(k)], e);
        }
        acc += m;
    }
    return acc;
}

inline Poly Poly::homogenize() const {
    Poly r(nvars_ + 1);
    if (is_zero()) return r;
    int d = degree();
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        MultiIndex m(nvars_ + 1);
        m.e[0] = d - t.mono.degree();
        for (int k = 0; k < nvars_; ++k) m.e[static_cast<size_t>(k + 1)] = t.mono.e[static_cast<size_t>(k)];
        r.terms_.push_back({t.coeff, std::move(m)});
    }
    std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& x, const Term& y) {
        return grevlex_cmp(x.mono, y.mono) == Ordering::Greater;
    });
    return r;
}

inline Poly Poly::dehomogenize_at(int j) const {
    if (j < 0 || j >= nvars_) throw input_error("dehomogenize_at: index out of range");
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        MultiIndex m(nvars_ - 1);
        int w = 0;
        for (int k = 0; k < nvars_; ++k) {
            if (k == j) continue;
            m.e[static_cast<size_t>(w++)] = t.mono.e[static_cast<size_t>(k)];
        }
        out.push_back({t.coeff, std::move(m)});
    }
    return Poly::from_terms(nvars_ - 1, std::move(out));
}

inline Poly Poly::substitute(const std::vector<Poly>& subs) const {
    if (static_cast<int>(subs.size()) != nvars_)
        throw input_error("Poly::substitute: wrong substitution count");
    int out_nvars = subs.empty() ? 0 : subs.front().nvars();
    Poly acc(out_nvars);
    for (const auto& t : terms_) {
        Poly m = Poly::constant(out_nvars, t.coeff);
        for (int k = 0; k < nvars_; ++k) {
            int e = t.mono.e[static_cast<size_t>(k)];
            if (e > 0) m = m * subs[static_cast<size_t>(k)].pow(e);
        }
        acc += m;
    }
    return acc;
}

// A homogeneous polynomial in N+1 variables (z0 prepended).
struct HPoly {
    Poly poly;
    explicit HPoly(Poly p) : poly(std::move(p)) {
        if (!poly.is_homogeneous())
            throw internal_error("HPoly: polynomial is not homogeneous");
    }
};

inline HPoly homogenize(const Poly& p) { return HPoly(p.homogenize()); }
inline Poly dehomogenize_at(const HPoly& h, int j) { return h.poly.dehomogenize_at(j); }

// ---------- text form ----------

inline std::string monomial_str(const MultiIndex& m, int first_var_index) {
    std::string s;
    for (int k = 0; k < m.nvars(); ++k) {
        int e = m.e[static_cast<size_t>(k)];
        if (e == 0) continue;
        if (!s.empty()) s += "*";
        s += "z" + std::to_string(first_var_index + k);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

inline std::string Poly::str(int first_var_index) const {
    if (is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : terms_) {
        GaussRational c = t.coeff;
        bool neg = c.is_real() && c.re.sign() < 0;
        if (first) {
            if (neg) { s += "-"; c = -c; }
        } else {
            s += neg ? " - " : " + ";
            if (neg) c = -c;
        }
        first = false;
        std::string mono = monomial_str(t.mono, first_var_index);
        bool coeff_is_one = (c == GaussRational(1));
        if (mono.empty()) {
            s += c.is_real() ? c.str() : ("(" + c.re.str() + (c.im.sign() >= 0 ? "+" : "-") +
                                          (c.im.sign() >= 0 ? c.im.str() : (-c.im).str()) + "i)");
        } else {
            if (!coeff_is_one) {
                if (c.is_real() && c.re.is_integer())
                    s += c.re.str() + "*";
                else if (c.is_real())
                    s += "(" + c.re.str() + ")*";
                else
                    s += "(" + c.re.str() + (c.im.sign() >= 0 ? "+" : "-") +
                         (c.im.sign() >= 0 ? c.im.str() : (-c.im).str()) + "i)*";
            }
            s += mono;
        }
    }
    return s;
}

// Recursive-descent parser for the generator syntax: rational or Gaussian
// rational coefficients, variables z1..zN, operators + - * ^, parentheses,
// and the imaginary unit literal "i". Juxtaposition multiplies.
class PolyParser {
public:
    PolyParser(std::string_view text, int nvars, int first_var_index = 1)
        : s_(text), nvars_(nvars), first_(first_var_index) {}

    Poly parse() {
        Poly p = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw input_error("polynomial parse error at position " + std::to_string(pos_) +
                              " in '" + std::string(s_) + "'");
        return p;
    }

private:
    std::string_view s_;
    size_t pos_ = 0;
    int nvars_;
    int first_;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Poly expr() {
        char c = peek();
        bool neg = false;
        if (c == '+' || c == '-') {
            neg = (c == '-');
            ++pos_;
        }
        Poly acc = product();
        if (neg) acc = -acc;
        while (true) {
            c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                Poly rhs = product();
                acc = (c == '+') ? acc + rhs : acc - rhs;
            } else {
                break;
            }
        }
        return acc;
    }

    Poly product() {
        Poly acc = power();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * power();
            } else if (c == '(' || c == 'z' || c == 'i' || std::isdigit(static_cast<unsigned char>(c))) {
                acc = acc * power(); // juxtaposition
            } else {
                break;
            }
        }
        return acc;
    }

    Poly power() {
        Poly base = atom();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) throw input_error("polynomial parse error: exponent expected");
            int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
            return base.pow(e);
        }
        return base;
    }

    Poly atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (peek() != ')') throw input_error("polynomial parse error: ')' expected");
            ++pos_;
            return p;
        }
        if (c == 'z') {
            ++pos_;
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) throw input_error("polynomial parse error: variable index expected");
            int idx = std::stoi(std::string(s_.substr(start, pos_ - start)));
            int var = idx - first_ + 1;
            if (var < 1 || var > nvars_)
                throw input_error("polynomial parse error: variable z" + std::to_string(idx) +
                                  " out of range");
            return Poly::variable(nvars_, var);
        }
        if (c == 'i') {
            ++pos_;
            return Poly::constant(nvars_, GaussRational::i());
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
                ++pos_;
            BigRational r = BigRational::parse(s_.substr(start, pos_ - start));
            // a rational literal directly followed by 'i' is imaginary
            if (pos_ < s_.size() && s_[pos_] == 'i') {
                ++pos_;
                return Poly::constant(nvars_, GaussRational(BigRational(0), r));
            }
            return Poly::constant(nvars_, GaussRational(r));
        }
        throw input_error("polynomial parse error: unexpected character at position " +
                          std::to_string(pos_));
    }
};

inline Poly parse_poly(std::string_view text, int nvars, int first_var_index = 1) {
    return PolyParser(text, nvars, first_var_index).parse();
}

} // namespace curvecap
