// The invariant five-dimensional tensor space V spanned by
//   e1 = lam^2 g,
//   e2 = u^2 g,
//   e3 = du (x) dubar u + dubar u (x) du   (the mixed block u_i u_jbar),
//   e4 = u hess u,
//   e5 = du (x) du + dubar u (x) dubar u   (the holomorphic block u_i u_j),
// the exact matrix of the deformation operator L = Delta + 2 Rm on it, the
// divergence table, and the solve for the distinguished second-order
// deformation h0.
//
// All scalar reductions here are geometric identities of CP^{2m-1} and use
// the canonical parameters (N+1 = 2m, n = 4m-2) regardless of any
// caller-supplied dimension override.

#pragma once

#include <vector>

#include "cpnv/chart.hpp"
#include "cpnv/eigenfunction.hpp"
#include "cpnv/linalg.hpp"
#include "cpnv/upoly.hpp"

namespace cpnv {

inline constexpr int kBasisDim = 5;

using BasisCoeffs = std::vector<RatFn>;  // always size 5

// Matrix of L acting on the ordered basis: column k holds the coordinates of
// L(e_k).
RatMatrix l_matrix();

// Exact inverse; entries have poles at m = 1 only.
RatMatrix l_inverse();

// Right-hand side of the second-order deformation equation (1/2) L h = rhs,
// expressed in basis coordinates.
BasisCoeffs second_order_rhs();

// The particular divergence-free solution h0 = 2 L^{-1} rhs.
BasisCoeffs solve_h0();

// Divergence of each basis element as a multiple of u grad u.
BasisCoeffs divergence_coeffs();
// Divergence of a combination, as a multiple of u grad u.
RatFn divergence_of(const BasisCoeffs& c);

// Trace of a combination as an element of the scalar space.
UPoly basis_trace(const BasisCoeffs& c);

// Inner product <h, hess u> of a combination with the Hessian of u.
UPoly basis_inner_hess_u(const BasisCoeffs& c);

// xi = g^{kbar l} u_{. kbar} u_{l .} expressed in basis coordinates.
BasisCoeffs xi_in_basis();

// |hess u|^2 as a scalar (the trace of 2 xi).
UPoly hess_u_norm_squared();

// Pointwise realization with lambda = 1 at an evaluated parameter.
TensorValue realize_basis_element(const Chart& chart, const ChartPoint& p, int k);
TensorValue realize_basis(const Chart& chart, const ChartPoint& p, const std::vector<double>& coeffs);
std::vector<double> eval_coeffs(const BasisCoeffs& c, long m0);

// delta* of the one-form c * u du (the divergence of basis fields), realized
// pointwise: -c (du (x) du + u hess u).
TensorValue realize_delta_star_u_du(const Chart& chart, const ChartPoint& p, double c);

}  // namespace cpnv
