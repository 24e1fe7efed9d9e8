#include "cpnv/rational.hpp"

#include <algorithm>
#include <sstream>

namespace cpnv {

std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

double rat_double(const Rat& q) { return q.get_d(); }

Poly::Poly(const Rat& c) {
    if (c != 0) c_.push_back(c);
}

Poly Poly::var() {
    Poly p;
    p.c_ = {rat(0), rat(1)};
    return p;
}

Poly Poly::from_coeffs(std::vector<Rat> coeffs) {
    Poly p;
    p.c_ = std::move(coeffs);
    p.trim();
    return p;
}

Rat Poly::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return rat(0);
    return c_[k];
}

Rat Poly::leading() const {
    if (is_zero()) return rat(0);
    return c_.back();
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    r.c_.resize(std::max(c_.size(), o.c_.size()), rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r.c_[i] += o.c_[i];
    r.trim();
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    Poly r;
    r.c_.assign(c_.size() + o.c_.size() - 1, rat(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r.c_[i + j] += c_[i] * o.c_[j];
    r.trim();
    return r;
}

Poly Poly::operator*(const Rat& s) const {
    if (s == 0) return Poly();
    Poly r = *this;
    for (auto& c : r.c_) c *= s;
    return r;
}

Rat Poly::eval(const Rat& x) const {
    Rat acc = rat(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Poly::eval_double(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + rat_double(*it);
    return acc;
}

Poly Poly::shift_var(const Rat& shift) const {
    // Horner in (x + shift).
    Poly acc;
    Poly lin = Poly::var() + Poly(shift);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + Poly(*it);
    return acc;
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw std::domain_error("Poly::divmod: division by zero polynomial");
    q = Poly();
    r = a;
    Rat lead = b.leading();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int k = r.degree() - b.degree();
        Rat f = r.leading() / lead;
        std::vector<Rat> mono(k + 1, rat(0));
        mono[k] = f;
        Poly m = Poly::from_coeffs(mono);
        q = q + m;
        r = r - m * b;
    }
}

Poly Poly::gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    // Monic normalization.
    Rat inv = rat(1) / a.leading();
    return a * inv;
}

std::string Poly::str(const std::string& sym) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        Rat c = coeff(k);
        if (c == 0) continue;
        bool neg = c < 0;
        Rat a = neg ? Rat(-c) : c;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        bool unit = (a == 1);
        if (k == 0) {
            os << a;
        } else {
            if (!unit) os << a << "*";
            os << sym;
            if (k > 1) os << "^" << k;
        }
    }
    return os.str();
}

namespace {

// Scale num and den so both have integer coefficients with joint content 1.
void integerize(Poly& num, Poly& den) {
    Int l = 1;
    for (const Rat& c : num.coeffs()) l = lcm(l, c.get_den());
    for (const Rat& c : den.coeffs()) l = lcm(l, c.get_den());
    Rat scale(l);
    num = num * scale;
    den = den * scale;
    Int g = 0;
    for (const Rat& c : num.coeffs()) g = gcd(g, c.get_num());
    for (const Rat& c : den.coeffs()) g = gcd(g, c.get_num());
    if (g > 1) {
        Rat inv = Rat(1) / Rat(g);
        num = num * inv;
        den = den * inv;
    }
}

}  // namespace

RatFn::RatFn(Poly num, Poly den) {
    if (den.is_zero()) throw std::domain_error("RatFn: zero denominator");
    if (num.is_zero()) {
        num_ = Poly();
        den_ = Poly(rat(1));
        return;
    }
    Poly g = Poly::gcd(num, den);
    if (g.degree() > 0) {
        Poly q, r;
        Poly::divmod(num, g, q, r);
        num = q;
        Poly::divmod(den, g, q, r);
        den = q;
    }
    integerize(num, den);
    if (den.leading() < 0) {
        num = -num;
        den = -den;
    }
    num_ = std::move(num);
    den_ = std::move(den);
}

RatFn RatFn::var() { return RatFn(Poly::var(), Poly(rat(1))); }

bool RatFn::is_one() const { return num_.degree() == 0 && den_.degree() == 0 && num_.coeff(0) == den_.coeff(0); }

RatFn RatFn::operator-() const {
    RatFn r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFn RatFn::operator+(const RatFn& o) const {
    return RatFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFn RatFn::operator-(const RatFn& o) const { return *this + (-o); }

RatFn RatFn::operator*(const RatFn& o) const { return RatFn(num_ * o.num_, den_ * o.den_); }

RatFn RatFn::operator/(const RatFn& o) const {
    if (o.is_zero()) throw std::domain_error("RatFn: division by zero function");
    return RatFn(num_ * o.den_, den_ * o.num_);
}

Rat RatFn::eval(const Rat& x) const {
    Rat d = den_.eval(x);
    if (d == 0) throw std::domain_error("RatFn::eval: pole at " + rat_str(x));
    return num_.eval(x) / d;
}

double RatFn::eval_double(double x) const { return num_.eval_double(x) / den_.eval_double(x); }

std::string RatFn::str(const std::string& sym) const {
    if (is_zero()) return "0";
    if (den_.degree() == 0 && den_.coeff(0) == 1) return num_.str(sym);
    return "(" + num_.str(sym) + ")/(" + den_.str(sym) + ")";
}

bool poly_positive_from(const Poly& p, const Rat& from) {
    if (p.is_zero()) return false;
    Poly s = p.shift_var(from);
    if (s.coeff(0) <= 0) return false;
    for (const Rat& c : s.coeffs())
        if (c < 0) return false;
    return true;
}

}  // namespace cpnv
