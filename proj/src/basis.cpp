#include "cpnv/basis.hpp"

#include <stdexcept>

namespace cpnv {

namespace {

RatFn m() { return RatFn::var(); }

void check_size(const BasisCoeffs& c) {
    if (static_cast<int>(c.size()) != kBasisDim)
        throw std::invalid_argument("basis: coefficient vector must have 5 entries");
}

}  // namespace

RatMatrix l_matrix() {
    RatFn one(1), inv_m = rfn(1) / m(), inv_4m2 = rfn(1, 4) / (m() * m());
    RatMatrix a(kBasisDim, kBasisDim);
    // L(lam^2 g) = lam^2 g.
    a.at(0, 0) = one;
    // L(u^2 g) = (lam^2/m) g - (1 + 1/m) u^2 g.
    a.at(0, 1) = inv_m;
    a.at(1, 1) = -(one + inv_m);
    // L(e3) = (lam^2 - u^2)/(4m^2) g - e3 - (1/m) e4.
    a.at(0, 2) = inv_4m2;
    a.at(1, 2) = -inv_4m2;
    a.at(2, 2) = -one;
    a.at(3, 2) = -inv_m;
    // L(e4) = -(lam^2 - u^2)/(4m^2) g - (1/m) e3 - e4.
    a.at(0, 3) = -inv_4m2;
    a.at(1, 3) = inv_4m2;
    a.at(2, 3) = -inv_m;
    a.at(3, 3) = -one;
    // L(e5) = -(1 + 1/m) e5.
    a.at(4, 4) = -(one + inv_m);
    return a;
}

RatMatrix l_inverse() { return invert(l_matrix()); }

BasisCoeffs second_order_rhs() {
    RatFn den = rfn(3) * m() + rfn(2);
    return {
        rfn(1, 2) / m(),
        -rfn(1) - rfn(1, 2) / m(),
        -(rfn(2) * m() * (m() + rfn(2))) / den,
        (rfn(4) * m() * m() - rfn(6) * m() - rfn(4)) / den,
        -(rfn(2) * m() * (m() + rfn(2))) / den,
    };
}

BasisCoeffs solve_h0() {
    BasisCoeffs x = solve_linear(l_matrix(), second_order_rhs());
    for (RatFn& v : x) v = rfn(2) * v;
    return x;
}

BasisCoeffs divergence_coeffs() {
    return {
        RatFn(),
        rfn(2),
        rfn(-1, 2),
        -(rfn(1, 2) / m() + rfn(1, 2)),
        -(rfn(1, 2) / m() + rfn(1, 2)),
    };
}

RatFn divergence_of(const BasisCoeffs& c) {
    check_size(c);
    BasisCoeffs d = divergence_coeffs();
    RatFn acc;
    for (int k = 0; k < kBasisDim; ++k) acc += c[k] * d[k];
    return acc;
}

UPoly basis_trace(const BasisCoeffs& c) {
    check_size(c);
    Params par = Params::cp_odd();
    UPoly out;
    out += UPoly::monomial(0, 1, c[0] * par.n);       // tr(lam^2 g) = n lam^2
    out += UPoly::monomial(2, 0, c[1] * par.n);       // tr(u^2 g) = n u^2
    out += grad_u_squared(par) * c[2];                // tr(e3) = |grad u|^2
    out += UPoly::monomial(2, 0, -c[3]);              // tr(e4) = u Delta u = -u^2
    return out;                                       // tr(e5) = 0
}

BasisCoeffs xi_in_basis() {
    RatFn inv_16m2 = rfn(1, 16) / (m() * m());
    return {inv_16m2, -inv_16m2, -rfn(1, 4) / m(), -rfn(1, 2) / m(), RatFn()};
}

// |hess u|^2 equals the full real trace of xi (the contraction doubles the
// Hermitian block already).
UPoly hess_u_norm_squared() { return basis_trace(xi_in_basis()); }

UPoly basis_inner_hess_u(const BasisCoeffs& c) {
    check_size(c);
    Params par = Params::cp_odd();
    UPoly u = UPoly::u_pow(1);
    UPoly out;
    out += UPoly::monomial(1, 1, -c[0]);                                   // <lam^2 g, hess u> = -lam^2 u
    out += UPoly::monomial(3, 0, -c[1]);                                   // <u^2 g, hess u> = -u^3
    out += grad_inner(grad_u_squared(par), u, par) * (c[2] * rat(1, 2));   // <e3, hess u>
    out += u * hess_u_norm_squared() * c[3];                               // <e4, hess u> = u |hess u|^2
    return out;                                                            // <e5, hess u> = 0 (type split)
}

TensorValue realize_basis_element(const Chart& chart, const ChartPoint& p, int k) {
    if (k < 0 || k >= kBasisDim) throw std::invalid_argument("realize_basis_element: index out of range");
    int n = chart.N;
    int mm = (chart.N + 1) / 2;
    DiagEigen u = DiagEigen::balanced(mm);
    MetricData md = metric_at(chart, p);
    double uval = u.value(p);
    std::vector<cd> du = u.grad(p);
    TensorValue t = TensorValue::zero(n);
    switch (k) {
        case 0:
            t.herm = md.g;
            break;
        case 1:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) t.herm[i][j] = uval * uval * md.g[i][j];
            break;
        case 2:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) t.herm[i][j] = du[i] * std::conj(du[j]);
            break;
        case 3: {
            CMat hs = u.hess(p);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) t.herm[i][j] = uval * hs[i][j];
            break;
        }
        case 4:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) t.holo[i][j] = du[i] * du[j];
            break;
    }
    return t;
}

TensorValue realize_basis(const Chart& chart, const ChartPoint& p, const std::vector<double>& coeffs) {
    if (static_cast<int>(coeffs.size()) != kBasisDim)
        throw std::invalid_argument("realize_basis: coefficient vector must have 5 entries");
    TensorValue acc = TensorValue::zero(chart.N);
    for (int k = 0; k < kBasisDim; ++k)
        if (coeffs[k] != 0.0) acc = acc + realize_basis_element(chart, p, k) * coeffs[k];
    return acc;
}

std::vector<double> eval_coeffs(const BasisCoeffs& c, long m0) {
    check_size(c);
    std::vector<double> out(kBasisDim);
    for (int k = 0; k < kBasisDim; ++k) out[k] = rat_double(c[k].eval(m0));
    return out;
}

TensorValue realize_delta_star_u_du(const Chart& chart, const ChartPoint& p, double c) {
    // delta*(alpha)_{ab} = -(1/2)(grad_a alpha_b + grad_b alpha_a) for the
    // one-form alpha = c u du gives -c (du (x) du + u hess u).
    TensorValue dudu = realize_basis_element(chart, p, 2) + realize_basis_element(chart, p, 4);
    TensorValue uhess = realize_basis_element(chart, p, 3);
    return (dudu + uhess) * (-c);
}

}  // namespace cpnv
