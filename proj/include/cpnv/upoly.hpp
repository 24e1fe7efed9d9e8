// The invariant scalar function space on CP^N generated by the distinguished
// first eigenfunction u: polynomials in u with coefficients graded by even
// powers of the amplitude lambda.  On this space the Laplacian, gradient
// pairings, Helmholtz solves and averaged integrals are all exact, driven by
//     Delta u = -u,     |grad u|^2 = (lambda^2 - u^2) / (N+1).

#pragma once

#include <map>
#include <optional>

#include "cpnv/rational.hpp"

namespace cpnv {

// Global parameters of the exact pipeline, all rational functions of the
// integer parameter m.
//   np1 : N+1 for the CP^N factor carrying u (2m for CP^{2m-1})
//   n   : real dimension entering the variational coefficients (4m-2 default)
struct Params {
    RatFn np1;
    RatFn n;

    // CP^{2m-1} with symbolic m: np1 = 2m, n = 4m-2.
    static Params cp_odd();
    // Same geometry, caller-supplied dimension coefficient (appendix formulas
    // for general n instantiated with this manifold's eigenfunction identities).
    static Params cp_odd_with_n(const RatFn& n);
};

class HelmholtzSingularError : public std::domain_error {
  public:
    HelmholtzSingularError(int degree, const std::string& what)
        : std::domain_error(what), degree_(degree) {}
    int degree() const { return degree_; }

  private:
    int degree_;
};

// Integral values graded by powers of lambda^2: sum_j parts[j] * lambda^{2j}.
struct LambdaGraded {
    std::map<int, RatFn> parts;

    RatFn coeff(int lam2_pow) const;
    bool is_zero() const;
    LambdaGraded operator+(const LambdaGraded& o) const;
    bool operator==(const LambdaGraded& o) const;
    std::string str() const;
};

class UPoly {
  public:
    UPoly() = default;
    static UPoly constant(const RatFn& c);
    static UPoly u_pow(int k);
    static UPoly lam2_pow(int j);
    static UPoly monomial(int u_pow, int lam2_pow, const RatFn& coeff);

    bool is_zero() const { return c_.empty(); }
    RatFn coeff(int u_pow, int lam2_pow) const;
    const std::map<std::pair<int, int>, RatFn>& terms() const { return c_; }
    int max_u_degree() const;

    UPoly operator-() const;
    UPoly operator+(const UPoly& o) const;
    UPoly operator-(const UPoly& o) const;
    UPoly operator*(const UPoly& o) const;
    UPoly operator*(const RatFn& s) const;
    UPoly& operator+=(const UPoly& o) { return *this = *this + o; }
    UPoly& operator-=(const UPoly& o) { return *this = *this - o; }
    bool operator==(const UPoly& o) const { return c_ == o.c_; }
    bool operator!=(const UPoly& o) const { return !(*this == o); }

    // Formal d/du.
    UPoly d_du() const;

    // Total degree u_pow + 2*lam2_pow if every term agrees, else nullopt.
    std::optional<int> homogeneous_degree() const;

    // Pointwise numeric value at given u, lambda^2 and parameter value m0.
    double eval_double(double u, double lam2, double m0) const;

    std::string str() const;

  private:
    void set(int u_pow, int lam2_pow, const RatFn& v);
    std::map<std::pair<int, int>, RatFn> c_;
};

inline UPoly operator*(const RatFn& s, const UPoly& p) { return p * s; }

UPoly laplacian(const UPoly& p, const Params& params);
UPoly grad_inner(const UPoly& p, const UPoly& q, const Params& params);

// |grad u|^2 as an element of the space.
UPoly grad_u_squared(const Params& params);

// Exact solve of (Delta + c) f = rhs by back-substitution down the u-degree
// triangle; throws HelmholtzSingularError naming the offending degree.
UPoly helmholtz_solve(const RatFn& c, const UPoly& rhs, const Params& params);

// Normalized average of u^k: the moment recurrence derived from integrating
// Delta(u^k) over the manifold.  Returns the rational factor of lambda^k for
// even k and zero for odd k.
RatFn moment_u_pow(int k, const Params& params);

// Normalized average of p, as a lambda^2-graded exact value.
LambdaGraded integrate_avg(const UPoly& p, const Params& params);

}  // namespace cpnv
