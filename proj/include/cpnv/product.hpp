// Second-order obstruction algebra for products CP^{2m} x M2, where the
// second factor is an Einstein manifold with Einstein constant 1/2 whose
// spectral assumptions are taken as a hypothesis flag.  The second factor is
// never realized geometrically: everything here is the formal integral
// algebra in two first eigenfunctions u, v of the CP factor, plus the square
// completion over a quadratic extension.

#pragma once

#include <cstdint>

#include "cpnv/chart.hpp"
#include "cpnv/rational.hpp"

namespace cpnv {

struct ProductConfig {
    long m = 1;    // CP^{2m} factor, real dimension n1 = 4m
    long n2 = 1;   // dim M2 >= 1
    bool dagger_assumed = true;  // the spectral hypotheses on M2

    long n1() const { return 4 * m; }
    long n() const { return n1() + n2; }
    void validate() const;
};

// Quadratic scalar in (u, v) extended by the gradient pairings.
struct QuadScalar {
    RatFn u2, v2, uv, guu, guv, gvv;
    QuadScalar operator+(const QuadScalar& o) const;
    QuadScalar operator*(const RatFn& s) const;
};

// Coefficients of the three independent eigenfunction integrals against w.
struct TraceIntegrals {
    RatFn u2w, v2w, uvw;
};

// Cross variation of the shrinker operator along (1+tu)(g + s v g1), kept as
// its tensor coefficients, its scalar equation, and both traces
// (the -lap f_st term is implicit).
struct CrossProductPhi {
    RatFn dudv_sym;
    RatFn u_hess_v_sym;
    QuadScalar metric_g;
    QuadScalar metric_g1;
    QuadScalar f_rhs;
    QuadScalar trace_g;
    QuadScalar trace_g1;
};

// The symbol m stays symbolic; n2 enters numerically.
CrossProductPhi cross_phi2_product(long n2);

// Integral of a trace record against an eigenfunction w of the CP factor,
// using avg(w f) = -2 avg(w rhs) for the solved scalar and the gradient
// reductions avg(<grad a, grad b> w) = avg(a b w)/2.
TraceIntegrals w_integral(const QuadScalar& trace, const QuadScalar& f_rhs);

// The six obstruction coefficients: pairings of the second variation of
// h = u g + v g1 with w g and with w g1.
struct ObstructionCoefficients {
    TraceIntegrals with_g;   // (n-2, 2(2m-1), n+4m-4)
    TraceIntegrals with_g1;  // ((4m+n-4)/2, 2(2m-1), 4(2m-1))
};
ObstructionCoefficients obstruction_coefficients(long n2);

// Quadratic forms in (u, v) obtained by normalizing the two pairings.
struct PsiForms {
    RatFn psi1_u2, psi1_v2, psi1_uv;
    RatFn psi2_u2, psi2_v2, psi2_uv;
};
PsiForms psi_forms(long n2);

// Elements a + b sqrt(disc) over the rational-function base field.
struct QuadExt {
    RatFn a, b, disc;

    static QuadExt of(const RatFn& a, const RatFn& b, const RatFn& disc) { return {a, b, disc}; }
    QuadExt operator+(const QuadExt& o) const;
    QuadExt operator-(const QuadExt& o) const;
    QuadExt operator*(const QuadExt& o) const;
    QuadExt operator/(const QuadExt& o) const;
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    bool operator==(const QuadExt& o) const;
};

struct RootIdentityResult {
    QuadExt x, y;
    bool identities_hold;     // both square completions, exactly
    bool conclusion_trivial;  // the 2x2 system forces u = v = 0
};

// Exact check at a concrete (m, n2).
RootIdentityResult root_identity_check(const ProductConfig& config);

// Exact check with the ratio lambda = n2 / (4(2m-1)) kept symbolic; covers
// every admissible pair at once.
RootIdentityResult root_identity_check_symbolic();

// Finite-difference residuals of the commutation identities of L = Delta+2Rm
// with divergence, its adjoint, and the trace, on the CP^{2m} factor.
struct CommutationResiduals {
    double trace_identity;
    double divergence_identity;
    double one_form_identity;
};
CommutationResiduals einstein_commutation_check(long m_factor, uint64_t seed, double step);

}  // namespace cpnv
