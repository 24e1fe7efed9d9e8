// First eigenfunctions of the Laplacian on CP^N (eigenvalue 1 in the
// Einstein-1/2 normalization), their closed-form derivatives in the chart,
// the auxiliary (1,1)-form built from the Hessian square, and the exact
// integration oracle over homogeneous-coordinate moduli.

#pragma once

#include <vector>

#include "cpnv/chart.hpp"
#include "cpnv/rational.hpp"

namespace cpnv {

// Diagonal eigenfunction w([Z]) = sum_a h_a |Z_a|^2 / |Z|^2 with sum h_a = 0,
// given by its coefficient vector over the N+1 homogeneous slots.
struct DiagEigen {
    std::vector<double> h;

    // The distinguished balanced eigenfunction on CP^{2m-1}:
    // lambda * (+1 on the first m slots, -1 on the rest).
    static DiagEigen balanced(int m, double lambda = 1.0);

    double value(const ChartPoint& p) const;
    // Holomorphic gradient components w_i = (h_i - w) zbar_i / S.
    std::vector<cd> grad(const ChartPoint& p) const;
    // Hessian: the (1,1) block w_{i jbar}; the (2,0)/(0,2) blocks vanish.
    CMat hess(const ChartPoint& p) const;
    TensorValue hess_tensor(const ChartPoint& p) const;
};

// General first eigenfunction from a traceless Hermitian matrix on the
// homogeneous coordinates (value only; derivatives via finite differences).
struct HermEigen {
    std::vector<std::vector<cd>> H;  // (N+1) x (N+1), traceless Hermitian
    double value(const ChartPoint& p) const;
};

// xi_{i jbar} = g^{kbar l} u_{i kbar} u_{l jbar}, computed both from the
// definition and from its closed combination
//   (lam^2 - u^2)/(16 m^2) g - (1/4m) du dubar - (1/2m) u hess(u).
struct XiValue {
    CMat contraction;
    CMat combination;
};
XiValue xi_at(const Chart& chart, const ChartPoint& p, const DiagEigen& u, double lambda2);

// --- exact integration over CP^N --------------------------------------------

// E[ prod |Z_a|^{2 e_a} / |Z|^{2 sum e} ] under the Fubini-Study-uniform
// measure: the moduli-squared vector is uniform on the simplex, so the moment
// is (d-1)! * prod(e_a!) / (d-1+sum e)! with d slots.
Rat sphere_moment(const std::vector<long>& exponents);

// Exact normalized average of (sum_a a_a x_a)^k over the simplex.
Rat simplex_avg_pow(const std::vector<Rat>& a, int k);

// Exact normalized average of u^2 w for diagonal coefficient vectors
// (both traceless).
Rat criterion_integral(const std::vector<Rat>& u_coeffs, const std::vector<Rat>& w_coeffs);

// Euclidean-Laplacian characterization of the unobstructed direction: for the
// lift f = sum lam_a |z_a|^2 of a diagonal eigenfunction, computes
// Delta_E f^2 (a diagonal quadratic) and Delta_E r^4, and decides whether
// proportionality of Delta_E f^2 to r^2 forces all |lam_a| equal.
struct EuclidCheck {
    std::vector<Rat> lap_f2_diag;  // coefficient of |z_a|^2 in Delta_E f^2
    Rat lap_r4_coeff;              // Delta_E r^4 = coeff * r^2
    bool proportional_to_r2;       // Delta_E f^2 proportional to r^2
    bool equal_moduli;             // all |lam_a| equal
};
EuclidCheck euclid_laplacian_check(const std::vector<Rat>& lam);

}  // namespace cpnv
