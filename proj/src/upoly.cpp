#include "cpnv/upoly.hpp"

#include <sstream>

namespace cpnv {

Params Params::cp_odd() {
    Params p;
    p.np1 = rfn(2) * RatFn::var();
    p.n = rfn(4) * RatFn::var() - rfn(2);
    return p;
}

Params Params::cp_odd_with_n(const RatFn& n) {
    Params p = cp_odd();
    p.n = n;
    return p;
}

RatFn LambdaGraded::coeff(int lam2_pow) const {
    auto it = parts.find(lam2_pow);
    return it == parts.end() ? RatFn() : it->second;
}

bool LambdaGraded::is_zero() const {
    for (const auto& [j, v] : parts)
        if (!v.is_zero()) return false;
    return true;
}

LambdaGraded LambdaGraded::operator+(const LambdaGraded& o) const {
    LambdaGraded r = *this;
    for (const auto& [j, v] : o.parts) {
        RatFn s = r.coeff(j) + v;
        if (s.is_zero())
            r.parts.erase(j);
        else
            r.parts[j] = s;
    }
    return r;
}

bool LambdaGraded::operator==(const LambdaGraded& o) const {
    LambdaGraded d = *this;
    for (const auto& [j, v] : o.parts) {
        RatFn s = d.coeff(j) - v;
        if (s.is_zero())
            d.parts.erase(j);
        else
            d.parts[j] = s;
    }
    return d.is_zero();
}

std::string LambdaGraded::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [j, v] : parts) {
        if (v.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << v.str();
        if (j == 1)
            os << " * lam^2";
        else if (j > 1)
            os << " * lam^" << 2 * j;
    }
    return os.str();
}

UPoly UPoly::constant(const RatFn& c) { return monomial(0, 0, c); }
UPoly UPoly::u_pow(int k) { return monomial(k, 0, RatFn(1)); }
UPoly UPoly::lam2_pow(int j) { return monomial(0, j, RatFn(1)); }

UPoly UPoly::monomial(int u_pow, int lam2_pow, const RatFn& coeff) {
    if (u_pow < 0 || lam2_pow < 0) throw std::invalid_argument("UPoly: negative exponent");
    UPoly p;
    p.set(u_pow, lam2_pow, coeff);
    return p;
}

void UPoly::set(int u_pow, int lam2_pow, const RatFn& v) {
    if (v.is_zero())
        c_.erase({u_pow, lam2_pow});
    else
        c_[{u_pow, lam2_pow}] = v;
}

RatFn UPoly::coeff(int u_pow, int lam2_pow) const {
    auto it = c_.find({u_pow, lam2_pow});
    return it == c_.end() ? RatFn() : it->second;
}

int UPoly::max_u_degree() const {
    int d = -1;
    for (const auto& [k, v] : c_) d = std::max(d, k.first);
    return d;
}

UPoly UPoly::operator-() const {
    UPoly r = *this;
    for (auto& [k, v] : r.c_) v = -v;
    return r;
}

UPoly UPoly::operator+(const UPoly& o) const {
    UPoly r = *this;
    for (const auto& [k, v] : o.c_) r.set(k.first, k.second, r.coeff(k.first, k.second) + v);
    return r;
}

UPoly UPoly::operator-(const UPoly& o) const { return *this + (-o); }

UPoly UPoly::operator*(const UPoly& o) const {
    UPoly r;
    for (const auto& [ka, va] : c_)
        for (const auto& [kb, vb] : o.c_) {
            int i = ka.first + kb.first, j = ka.second + kb.second;
            r.set(i, j, r.coeff(i, j) + va * vb);
        }
    return r;
}

UPoly UPoly::operator*(const RatFn& s) const {
    UPoly r;
    if (s.is_zero()) return r;
    for (const auto& [k, v] : c_) r.set(k.first, k.second, v * s);
    return r;
}

UPoly UPoly::d_du() const {
    UPoly r;
    for (const auto& [k, v] : c_)
        if (k.first > 0) r.set(k.first - 1, k.second, v * rfn(k.first));
    return r;
}

std::optional<int> UPoly::homogeneous_degree() const {
    std::optional<int> deg;
    for (const auto& [k, v] : c_) {
        int d = k.first + 2 * k.second;
        if (!deg)
            deg = d;
        else if (*deg != d)
            return std::nullopt;
    }
    return deg;
}

double UPoly::eval_double(double u, double lam2, double m0) const {
    double acc = 0.0;
    for (const auto& [k, v] : c_) {
        double t = v.eval_double(m0);
        for (int i = 0; i < k.first; ++i) t *= u;
        for (int j = 0; j < k.second; ++j) t *= lam2;
        acc += t;
    }
    return acc;
}

std::string UPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << v.str() << ")";
        if (k.first == 1)
            os << "*u";
        else if (k.first > 1)
            os << "*u^" << k.first;
        if (k.second == 1)
            os << "*lam^2";
        else if (k.second > 1)
            os << "*lam^" << 2 * k.second;
    }
    return os.str();
}

UPoly laplacian(const UPoly& p, const Params& params) {
    // Delta(u^k) = -(k + k(k-1)/(N+1)) u^k + (k(k-1)/(N+1)) lam^2 u^{k-2}.
    UPoly r;
    for (const auto& [k, v] : p.terms()) {
        int i = k.first, j = k.second;
        if (i == 0) continue;
        RatFn drop = rfn(i * (i - 1)) / params.np1;
        r += UPoly::monomial(i, j, -(rfn(i) + drop) * v);
        if (i >= 2) r += UPoly::monomial(i - 2, j + 1, drop * v);
    }
    return r;
}

UPoly grad_u_squared(const Params& params) {
    return (UPoly::lam2_pow(1) - UPoly::u_pow(2)) * (RatFn(1) / params.np1);
}

UPoly grad_inner(const UPoly& p, const UPoly& q, const Params& params) {
    return p.d_du() * q.d_du() * grad_u_squared(params);
}

UPoly helmholtz_solve(const RatFn& c, const UPoly& rhs, const Params& params) {
    // (Delta + c) maps u^i lam^{2j} to
    //   (c - i - i(i-1)/(N+1)) u^i lam^{2j} + (i(i-1)/(N+1)) u^{i-2} lam^{2(j+1)},
    // lower-triangular in the u-degree, so solve from the top degree down.
    UPoly residual = rhs;
    UPoly solution;
    for (int i = residual.max_u_degree(); i >= 0; --i) {
        RatFn diag = c - rfn(i) - rfn(i * (i - 1)) / params.np1;
        std::vector<std::pair<int, RatFn>> found;
        for (const auto& [k, v] : residual.terms())
            if (k.first == i) found.emplace_back(k.second, v);
        if (found.empty()) continue;
        if (diag.is_zero())
            throw HelmholtzSingularError(
                i, "helmholtz_solve: operator singular on u-degree " + std::to_string(i));
        for (const auto& [j, v] : found) {
            RatFn coeff = v / diag;
            UPoly term = UPoly::monomial(i, j, coeff);
            solution += term;
            residual -= laplacian(term, params) + term * c;
        }
    }
    if (!residual.is_zero()) throw std::logic_error("helmholtz_solve: nonzero residual");
    return solution;
}

RatFn moment_u_pow(int k, const Params& params) {
    if (k < 0) throw std::invalid_argument("moment_u_pow: negative power");
    if (k % 2 == 1) return RatFn();
    RatFn acc(1);
    for (int i = k; i >= 2; i -= 2) acc *= rfn(i - 1) / (params.np1 + rfn(i - 1));
    return acc;
}

LambdaGraded integrate_avg(const UPoly& p, const Params& params) {
    LambdaGraded out;
    for (const auto& [k, v] : p.terms()) {
        int i = k.first, j = k.second;
        RatFn mu = moment_u_pow(i, params);
        if (mu.is_zero()) continue;
        int grade = j + i / 2;
        RatFn s = out.coeff(grade) + v * mu;
        if (s.is_zero())
            out.parts.erase(grade);
        else
            out.parts[grade] = s;
    }
    return out;
}

}  // namespace cpnv
