// Variational formulas of the shrinker operator along conformal and mixed
// deformations, as structured symbolic tensor expressions over a fixed atom
// set with scalar coefficients in the invariant function space.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpnv/basis.hpp"
#include "cpnv/fd.hpp"
#include "cpnv/upoly.hpp"

namespace cpnv {

enum class Atom {
    Metric,            // g
    DuDu,              // du (x) du (both blocks)
    DuDauxSym,         // du (x) dpsi + dpsi (x) du, psi a named aux scalar
    HessU,             // hess u
    UHessU,            // u hess u
    U2HessU,           // u^2 hess u
    HessAux,           // hess psi, psi a named aux scalar
    H,                 // the divergence-free 2-tensor slot
    UH,                // u h
    LapUH,             // Delta (u h)
    RmUH,              // Rm (u h)
    DeltaStarDeltaUH,  // delta* delta (u h)
    HessUTrH,          // hess (u Tr h)
    ChGradU,           // C(h) . grad u,  C^k_ij = (1/2) g^{kl} (h_jl,i + h_il,j - h_ij,l)
};

struct Term {
    Atom atom;
    std::string aux;  // names the scalar slot for DuDauxSym / HessAux
    UPoly coeff;
};

struct TensorExpr {
    std::vector<Term> terms;
    std::map<std::string, UPoly> aux_scalars;

    void add(Atom atom, UPoly coeff, std::string aux = "");
    UPoly coeff_of(Atom atom, const std::string& aux = "") const;
    TensorExpr operator-() const;

    bool has_h_atoms() const;
};

// Trace against g.  Expressions holding h-atoms need the basis coordinates of
// h (divergence-free combinations only).
UPoly trace(const TensorExpr& e, const Params& par, const BasisCoeffs* h = nullptr);

// Basis coordinates of an expression that lies in the invariant 5-space;
// throws if an atom or coefficient falls outside it.
BasisCoeffs to_basis(const TensorExpr& e);

// Pointwise evaluation (h-atom-free expressions), with lambda = 1.
TensorValue eval_tensor_expr(const TensorExpr& e, const Chart& chart, const ChartPoint& p, long m0);

// --- conformal variation table ----------------------------------------------

// Variations at t = 0 of geometric quantities along g(t) = (1 + t u) g on a
// general n-manifold, before any eigenfunction reduction: scalar results are
// coefficient records over named monomials ("u.R", "lap_u", "grad_u_sq", ...).
enum class ConformalQuantity { Ricci, Scalar, HessPsi, LapPsi };

std::map<std::string, RatFn> conformal_variation_scalar(ConformalQuantity q, int order,
                                                        const RatFn& n);

// Ricci variation instantiated on CP^{2m-1} (eigenfunction identities applied)
// as a tensor expression; orders 1..3.
TensorExpr ricci_variation(int order, const Params& par);

// --- shrinker operator variations -------------------------------------------

// Second conformal variation Phi_tt with its scalar, solved exactly.
TensorExpr phi_tt(const Params& par);

// Third conformal variation Phi_ttt; includes the averaged-u^3 term of its
// scalar equation (which vanishes here).
TensorExpr phi_ttt(const Params& par);

// Basis coordinates of the second-order right-hand side -Phi_tt; this is the
// derivation-side twin of basis::second_order_rhs().
BasisCoeffs second_order_rhs_derived();

// --- two-eigenfunction (cross) conformal variation ---------------------------

// Coefficient pair a*uv + b*<grad u, grad v>.
struct CrossScalar {
    RatFn uv;
    RatFn grad;
    CrossScalar operator+(const CrossScalar& o) const { return {uv + o.uv, grad + o.grad}; }
    CrossScalar operator*(const RatFn& s) const { return {uv * s, grad * s}; }
};

// The cross variation Phi_st along (1 + tu + sv) g for two first
// eigenfunctions, kept as its g-trace record plus the scalar equation; the
// full tensor expression is recoverable from the stored atoms.
struct CrossPhiSt {
    RatFn dudv_sym;        // tensor coefficient of du dv + dv du
    RatFn u_hess_v_sym;    // tensor coefficient of u hess v + v hess u
    CrossScalar metric;    // tensor coefficient of g
    CrossScalar f_rhs;     // (Delta + 1/2) f_st = f_rhs
    CrossScalar trace_g;   // <Phi_st, g> minus the -Delta f_st term
};

CrossPhiSt phi_st_conformal(const Params& par);

// Integral of <Phi_st, u g> as a multiple of the average of u^2 v, using the
// eigenfunction integral reductions.
RatFn phi_st_u_weighted_integral(const CrossPhiSt& c);

// --- mixed variation against a divergence-free 2-tensor ----------------------

struct MixedPhiSt {
    TensorExpr ricci_st;  // the cross Ricci variation (h-atoms)
    UPoly trace_g;        // <Phi_st, g> with the scalar solved and eliminated
    UPoly f_rhs;          // right-hand side of (Delta + 1/2) f_st
    UPoly f_st;           // the solved scalar
};

// Requires divergence_of(h) = 0.
MixedPhiSt phi_st_mixed(const BasisCoeffs& h, const Params& par);

// --- finite-difference validation --------------------------------------------

struct VariationCheck {
    double error;      // max abs deviation, FD vs closed form
    double scale;      // max abs of the closed form
};

// Ricci variation of (1 + t u) g at orders 1, 2 against the real-coordinate
// curvature engine, with Richardson extrapolation in the spatial step.
VariationCheck fd_validate_variation(int order, const Chart& chart, const ChartPoint& p,
                                     const FDConfig& cfg);

// --- first variation --------------------------------------------------------

// Pointwise 2 Phi'(h) for a combination of basis fields, including the gauge
// terms 2 delta* delta h + hess(H - 2f'); all curvature and gauge terms are in
// closed form and only the rough Laplacian uses finite differences.
TensorValue two_phi_prime(const Chart& chart, const ChartPoint& p, const BasisCoeffs& h, long m0,
                          double step);
TensorValue two_phi_prime_basis(const Chart& chart, const ChartPoint& p, int k, long m0,
                                double step);

// Pointwise L(v g + 2 hess v) for a diagonal traceless eigenfunction; these
// fields span the kernel of the first variation.
TensorValue l_of_conformal_kernel_field(const Chart& chart, const ChartPoint& p,
                                        const DiagEigen& v, double step);

}  // namespace cpnv
