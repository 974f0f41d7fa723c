#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "curvecap/errors.hpp"

namespace curvecap {

// Exact rational number. Thin value wrapper over GMP's mpq_class that keeps
// the canonical form invariant: gcd(num, den) = 1, den > 0, zero is 0/1.
class BigRational {
public:
    BigRational() : v_(0) {}
    BigRational(long n) : v_(n) {}
    BigRational(long num, long den) {
        if (den == 0) throw input_error("BigRational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit BigRational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    BigRational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw input_error("BigRational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }

    static BigRational parse(std::string_view text);

    const mpz_class& numerator() const { return v_.get_num(); }
    const mpz_class& denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    BigRational operator-() const { return BigRational(mpq_class(-v_), NoCanon{}); }
    BigRational& operator+=(const BigRational& o) { v_ += o.v_; return *this; }
    BigRational& operator-=(const BigRational& o) { v_ -= o.v_; return *this; }
    BigRational& operator*=(const BigRational& o) { v_ *= o.v_; return *this; }
    BigRational& operator/=(const BigRational& o) {
        if (o.is_zero()) throw input_error("BigRational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
    friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
    friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
    friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return a.v_ >= b.v_; }

    BigRational abs() const { return BigRational(mpq_class(::abs(v_)), NoCanon{}); }

    // Nearest double (ties to even). mpq_get_d truncates toward zero, so the
    // true nearest is either that value or its neighbor away from zero.
    double to_double(bool* overflow = nullptr) const;

    // "n" when the denominator is 1, otherwise "n/d".
    std::string str() const;

    const mpq_class& raw() const { return v_; }

private:
    struct NoCanon {};
    BigRational(mpq_class q, NoCanon) : v_(std::move(q)) {}
    mpq_class v_;
};

inline double BigRational::to_double(bool* overflow) const {
    if (overflow) *overflow = false;
    double d = v_.get_d(); // truncated toward zero
    if (std::isinf(d)) {
        if (overflow) *overflow = true;
        return d;
    }
    double d2 = std::nextafter(d, sign() >= 0 ? std::numeric_limits<double>::infinity()
                                              : -std::numeric_limits<double>::infinity());
    if (std::isinf(d2)) {
        // |value| between DBL_MAX and the next step; truncation is nearest.
        return d;
    }
    mpq_class e1 = ::abs(v_ - mpq_class(d));
    mpq_class e2 = ::abs(mpq_class(d2) - v_);
    if (e1 < e2) return d;
    if (e2 < e1) return d2;
    // exact tie: round to even mantissa
    std::int64_t m1 = static_cast<std::int64_t>(std::abs(std::ldexp(d, -std::ilogb(d == 0.0 ? 1.0 : d) + 52)));
    return (m1 % 2 == 0) ? d : d2;
}

inline std::string BigRational::str() const {
    if (is_integer()) return numerator().get_str();
    return numerator().get_str() + "/" + denominator().get_str();
}

inline BigRational BigRational::parse(std::string_view text) {
    std::string s(text);
    // strip spaces
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw input_error("BigRational: empty literal");
    auto slash = t.find('/');
    try {
        if (slash == std::string::npos) {
            mpz_class n(t);
            return BigRational(mpq_class(n), NoCanon{});
        }
        mpz_class n(t.substr(0, slash));
        mpz_class d(t.substr(slash + 1));
        return BigRational(n, d);
    } catch (const std::invalid_argument&) {
        throw input_error("BigRational: cannot parse '" + s + "'");
    }
}

// Exact complex number with rational real and imaginary parts: the
// coefficient field Q(i) for all symbolic computation in this library.
struct GaussRational {
    BigRational re;
    BigRational im;

    GaussRational() = default;
    GaussRational(BigRational r) : re(std::move(r)) {}
    GaussRational(long r) : re(r) {}
    GaussRational(BigRational r, BigRational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussRational i() { return GaussRational(BigRational(0), BigRational(1)); }
    static GaussRational parse(std::string_view text);

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    GaussRational conj() const { return GaussRational(re, -im); }
    BigRational norm2() const { return re * re + im * im; }

    GaussRational operator-() const { return GaussRational(-re, -im); }
    GaussRational& operator+=(const GaussRational& o) { re += o.re; im += o.im; return *this; }
    GaussRational& operator-=(const GaussRational& o) { re -= o.re; im -= o.im; return *this; }
    GaussRational& operator*=(const GaussRational& o) {
        BigRational r = re * o.re - im * o.im;
        BigRational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GaussRational& operator/=(const GaussRational& o) {
        if (o.is_zero()) throw input_error("GaussRational: division by zero");
        BigRational n2 = o.norm2();
        *this *= o.conj();
        re /= n2;
        im /= n2;
        return *this;
    }

    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
    friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

    GaussRational inverse() const {
        GaussRational one(BigRational(1));
        return one / *this;
    }

    std::complex<double> to_complex(bool* overflow = nullptr) const {
        bool o1 = false, o2 = false;
        double r = re.to_double(&o1);
        double i = im.to_double(&o2);
        if (overflow) *overflow = o1 || o2;
        return {r, i};
    }

    // "a/b" for real values, "(a/b)+(c/d)i" otherwise; round-trips exactly.
    std::string str() const {
        if (im.is_zero()) return re.str();
        std::string s = "(" + re.str() + ")";
        if (im.sign() >= 0)
            s += "+(" + im.str() + ")i";
        else
            s += "-(" + (-im).str() + ")i";
        return s;
    }
};

inline GaussRational GaussRational::parse(std::string_view text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw input_error("GaussRational: empty literal");
    if (t.back() != 'i') return GaussRational(BigRational::parse(t));
    // forms: "(a/b)+(c/d)i", "(a/b)-(c/d)i", "(c/d)i", "i", "-i"
    if (t == "i") return GaussRational(BigRational(0), BigRational(1));
    if (t == "-i") return GaussRational(BigRational(0), BigRational(-1));
    std::string body = t.substr(0, t.size() - 1);
    // split at the '+'/'-' that separates the two parenthesized groups
    if (!body.empty() && body.back() == ')') {
        int depth = 0;
        for (size_t k = body.size(); k-- > 0;) {
            char c = body[k];
            if (c == ')') depth++;
            else if (c == '(') depth--;
            else if (depth == 0 && (c == '+' || c == '-') && k > 0) {
                std::string rp = body.substr(0, k);
                std::string ip = body.substr(k + 1);
                auto strip_parens = [](std::string s) {
                    if (s.size() >= 2 && s.front() == '(' && s.back() == ')')
                        return s.substr(1, s.size() - 2);
                    return s;
                };
                BigRational re = BigRational::parse(strip_parens(rp));
                BigRational im = BigRational::parse(strip_parens(ip));
                if (c == '-') im = -im;
                return GaussRational(re, im);
            }
        }
        // single parenthesized group followed by i: pure imaginary
        std::string ip = body.substr(1, body.size() - 2);
        return GaussRational(BigRational(0), BigRational::parse(ip));
    }
    // bare "ni" style
    return GaussRational(BigRational(0), BigRational::parse(body));
}

} // namespace curvecap
