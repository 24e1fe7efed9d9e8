// Exact rational arithmetic: arbitrary-precision rationals, dense univariate
// polynomials over Q, and the rational-function field they generate.
//
// Everything here is a value type with canonical representation, so equality
// is literal componentwise comparison.

#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace cpnv {

using Int = mpz_class;
using Rat = mpq_class;

// Canonical rational from a numerator/denominator pair.
inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rat: zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

std::string rat_str(const Rat& q);
double rat_double(const Rat& q);

// Dense univariate polynomial over Q in one formal symbol.  Coefficients are
// stored by ascending power with no trailing zeros; the zero polynomial has an
// empty coefficient vector and degree -1.
class Poly {
  public:
    Poly() = default;
    Poly(const Rat& c);
    Poly(long c) : Poly(rat(c)) {}
    static Poly var();
    static Poly from_coeffs(std::vector<Rat> coeffs);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    Rat coeff(int k) const;
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat leading() const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rat& s) const;
    bool operator==(const Poly& o) const { return c_ == o.c_; }

    Rat eval(const Rat& x) const;
    double eval_double(double x) const;

    // Substitute x -> x + shift (used for sign certificates on [a, inf)).
    Poly shift_var(const Rat& shift) const;

    // Euclidean division; throws on zero divisor.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
    // Monic gcd over Q; gcd(0, 0) = 0.
    static Poly gcd(Poly a, Poly b);

    std::string str(const std::string& sym = "m") const;

  private:
    void trim();
    std::vector<Rat> c_;
};

// Rational function num/den over Q in one formal symbol, kept canonical:
// gcd(num, den) = 1, both have integer coefficients of joint content 1, and
// the denominator's leading coefficient is positive.
class RatFn {
  public:
    RatFn() : num_(), den_(rat(1)) {}
    RatFn(long c) : RatFn(Poly(rat(c)), Poly(rat(1))) {}
    RatFn(const Rat& c) : RatFn(Poly(c), Poly(rat(1))) {}
    RatFn(const Poly& p) : RatFn(p, Poly(rat(1))) {}
    RatFn(Poly num, Poly den);
    static RatFn var();

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;

    RatFn operator-() const;
    RatFn operator+(const RatFn& o) const;
    RatFn operator-(const RatFn& o) const;
    RatFn operator*(const RatFn& o) const;
    RatFn operator/(const RatFn& o) const;
    RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
    RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
    RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
    bool operator==(const RatFn& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFn& o) const { return !(*this == o); }

    // Exact evaluation; throws std::domain_error on a denominator root.
    Rat eval(const Rat& x) const;
    Rat eval(long x) const { return eval(rat(x)); }
    double eval_double(double x) const;

    std::string str(const std::string& sym = "m") const;

  private:
    Poly num_, den_;
};

inline RatFn operator*(const Rat& s, const RatFn& f) { return RatFn(s) * f; }
inline RatFn operator*(long s, const RatFn& f) { return RatFn(s) * f; }

// Convenience: small rational constant as a RatFn.
inline RatFn rfn(long num, long den = 1) { return RatFn(rat(num, den)); }

// True if p(x) > 0 for every rational x >= from.  Certificate: after the
// substitution x -> x + from, all coefficients are nonnegative and the
// constant term is positive.  Sufficient, not necessary.
bool poly_positive_from(const Poly& p, const Rat& from);

}  // namespace cpnv
