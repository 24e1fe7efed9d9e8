#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cpnv/variational.hpp"

using namespace cpnv;

namespace {

RatFn m() { return RatFn::var(); }

ChartPoint random_point(const Chart& chart, Rng& rng, double radius = 0.6) {
    std::vector<cd> z(chart.N);
    for (auto& zi : z) zi = radius * cd(2 * rng.uniform01() - 1, 2 * rng.uniform01() - 1);
    return chart.point(std::move(z));
}

}  // namespace

TEST_CASE("conformal variation table, scalar entries") {
    RatFn n = RatFn::var();  // treat the dimension itself as the symbol here

    auto r1 = conformal_variation_scalar(ConformalQuantity::Scalar, 1, n);
    CHECK(r1.at("u.R") == rfn(-1));
    CHECK(r1.at("lap_u") == -(n - rfn(1)));

    auto r2 = conformal_variation_scalar(ConformalQuantity::Scalar, 2, n);
    CHECK(r2.at("u2.R") == rfn(2));
    CHECK(r2.at("u.lap_u") == rfn(4) * (n - rfn(1)));
    CHECK(r2.at("grad_u_sq") == -(n - rfn(1)) * (n - rfn(6)) * rfn(1, 2));

    auto l1 = conformal_variation_scalar(ConformalQuantity::LapPsi, 1, n);
    CHECK(l1.at("u.lap_psi") == rfn(-1));
    CHECK(l1.at("grad_u_psi") == (n - rfn(2)) * rfn(1, 2));

    auto h2 = conformal_variation_scalar(ConformalQuantity::HessPsi, 2, n);
    CHECK(h2.at("u.du_dpsi_sym") == rfn(1));

    CHECK_THROWS_AS(conformal_variation_scalar(ConformalQuantity::Scalar, 4, n),
                    std::invalid_argument);
}

TEST_CASE("first variation of the laplacian composed with the eigenfunction") {
    // (Delta psi)_t with psi = u and Delta u = -u reduces to
    // u^2 + (n-2)/2 |grad u|^2 in the scalar space.
    Params par = Params::cp_odd();
    UPoly u = UPoly::u_pow(1);
    auto l1 = conformal_variation_scalar(ConformalQuantity::LapPsi, 1, par.n);
    UPoly reduced = u * (-u) * l1.at("u.lap_psi") + grad_inner(u, u, par) * l1.at("grad_u_psi");
    UPoly expect = UPoly::u_pow(2) + grad_u_squared(par) * ((par.n - rfn(2)) * rat(1, 2));
    CHECK(reduced == expect);
}

TEST_CASE("second conformal variation of the shrinker operator") {
    Params par = Params::cp_odd();
    TensorExpr e = phi_tt(par);

    // The scalar solves to the quadratic of the second-order system.
    RatFn den = rfn(3) * m() + rfn(2);
    const UPoly& f_tt = e.aux_scalars.at("f_tt");
    CHECK(f_tt.coeff(2, 0) == -(rfn(4) * m() * m() + m() - rfn(2)) / den);
    CHECK(f_tt.coeff(0, 1) == -(m() - rfn(2)) / den);

    // Coefficient of du x du at n = 4m-2 is -2(m-1).
    CHECK(e.coeff_of(Atom::DuDu).coeff(0, 0) == rfn(-2) * (m() - rfn(1)));

    // Coefficient of u hess u is -(n-2) = -(4m-4).
    CHECK(e.coeff_of(Atom::UHessU).coeff(0, 0) == rfn(-4) * (m() - rfn(1)));

    // Trace integrates to zero against u (odd symmetry of the cubic moment).
    UPoly tr = trace(e, par);
    CHECK(integrate_avg(UPoly::u_pow(1) * tr, par).is_zero());
}

TEST_CASE("first and third Ricci variations, instantiated coefficients") {
    Params par = Params::cp_odd();
    TensorExpr r1 = ricci_variation(1, par);
    CHECK(r1.coeff_of(Atom::HessU).coeff(0, 0) == -(par.n - rfn(2)) * rfn(1, 2));
    CHECK(r1.coeff_of(Atom::Metric) == UPoly::monomial(1, 0, rfn(1, 2)));  // -(1/2)(Delta u) g

    TensorExpr r3 = ricci_variation(3, par);
    CHECK(r3.coeff_of(Atom::U2HessU).coeff(0, 0) == rfn(-3) * (par.n - rfn(2)));
    CHECK(r3.coeff_of(Atom::DuDu).coeff(1, 0) == rfn(-9) * (par.n - rfn(2)));
    CHECK_THROWS_AS(ricci_variation(4, par), std::invalid_argument);
}

TEST_CASE("general-dimension coefficients with the chart geometry fixed") {
    // The appendix formulas carry a free dimension; instantiating it away from
    // 4m-2 only changes the rational coefficients.
    Params par = Params::cp_odd_with_n(rfn(10));
    TensorExpr e = phi_tt(par);
    CHECK(e.coeff_of(Atom::DuDu).coeff(0, 0) == rfn(-4));
    CHECK(e.coeff_of(Atom::UHessU).coeff(0, 0) == rfn(-8));
    UPoly f_rhs = laplacian(e.aux_scalars.at("f_tt"), Params::cp_odd()) +
                  e.aux_scalars.at("f_tt") * rfn(1, 2);
    // u^2 coefficient of the scalar equation: n/2 + (3n-2)/(8m) at n = 10.
    CHECK(f_rhs.coeff(2, 0) == rfn(5) + rfn(7, 2) / RatFn::var());
}

TEST_CASE("mixed variation against a parallel metric multiple") {
    // lam^2 g is divergence-free; the trace reduces to (n-1) lam^2 u.
    Params par = Params::cp_odd();
    BasisCoeffs e1(kBasisDim, RatFn());
    e1[0] = RatFn(1);
    MixedPhiSt mixed = phi_st_mixed(e1, par);
    CHECK(mixed.f_st.is_zero());
    CHECK(mixed.trace_g == UPoly::monomial(1, 1, par.n - rfn(1)));
}

TEST_CASE("the derived second-order right-hand side matches the entered one") {
    BasisCoeffs derived = second_order_rhs_derived();
    BasisCoeffs entered = second_order_rhs();
    for (int i = 0; i < kBasisDim; ++i) CHECK(derived[i] == entered[i]);
}

TEST_CASE("third conformal variation") {
    Params par = Params::cp_odd();
    TensorExpr e = phi_ttt(par);

    // Coefficient of u du x du is 6(n-2).
    UPoly dudu = e.coeff_of(Atom::DuDu);
    CHECK(dudu.coeff(1, 0) == rfn(6) * (par.n - rfn(2)));

    // The scalar is odd in u (the averaged-u^3 source vanishes).
    const UPoly& f_ttt = e.aux_scalars.at("f_ttt");
    for (const auto& [k, v] : f_ttt.terms()) CHECK(k.first % 2 == 1);

    // Round trip of the scalar equation.
    Params geo = Params::cp_odd();
    UPoly u = UPoly::u_pow(1);
    UPoly f_tt = e.aux_scalars.at("f_tt");
    UPoly rhs = u * laplacian(f_tt, geo) * rfn(3) -
                grad_inner(f_tt, u, geo) * (rfn(3, 2) * (par.n - rfn(2))) -
                UPoly::u_pow(3) * (rfn(3, 2) * (rfn(3) * par.n - rfn(2))) +
                u * grad_u_squared(geo) * (rfn(9, 4) * (rfn(3) * par.n - rfn(2)));
    CHECK(laplacian(f_ttt, geo) + f_ttt * rfn(1, 2) == rhs);
}

TEST_CASE("cross conformal variation and its u-weighted integral") {
    Params par = Params::cp_odd();
    CrossPhiSt c = phi_st_conformal(par);

    // Trace coefficients: 2(n-1) on uv and -(3n-2)/2 on <grad u, grad v>.
    CHECK(c.trace_g.uv == rfn(2) * (par.n - rfn(1)));
    CHECK(c.trace_g.grad == -(rfn(3) * par.n - rfn(2)) * rfn(1, 2));

    // At n = 4m-2 the whole pipeline collapses to 4(m-1) times avg(u^2 v).
    CHECK(phi_st_u_weighted_integral(c) == rfn(4) * (m() - rfn(1)));

    // Polarization at v = u: the trace record reduces to the trace of the
    // second conformal variation.
    Params geo = Params::cp_odd();
    UPoly tr_cross = UPoly::u_pow(2) * c.trace_g.uv + grad_u_squared(geo) * c.trace_g.grad;
    UPoly f_rhs_cross = UPoly::u_pow(2) * c.f_rhs.uv + grad_u_squared(geo) * c.f_rhs.grad;
    UPoly f_cross = helmholtz_solve(rfn(1, 2), f_rhs_cross, geo);
    TensorExpr tt = phi_tt(par);
    CHECK(tr_cross - laplacian(f_cross, geo) == trace(tt, par));
}

TEST_CASE("mixed variation against the distinguished deformation") {
    Params par = Params::cp_odd();
    BasisCoeffs h0 = solve_h0();
    MixedPhiSt mixed = phi_st_mixed(h0, par);

    // The scalar equation round-trips.
    Params geo = Params::cp_odd();
    CHECK(laplacian(mixed.f_st, geo) + mixed.f_st * rfn(1, 2) == mixed.f_rhs);

    // Trace identity: tracing the full expression
    //   Phi_st = -Rc_st - hess f_st + (n-2)/2 C(h).grad u
    //            + (1/4)(du dH + dH du - <grad u, grad H> g)
    // atom by atom reproduces the recorded trace.
    UPoly htrace = basis_trace(h0);
    TensorExpr full = -mixed.ricci_st;
    full.aux_scalars["f_st"] = mixed.f_st;
    full.aux_scalars["H"] = htrace;
    full.add(Atom::HessAux, UPoly::constant(rfn(-1)), "f_st");
    full.add(Atom::ChGradU, UPoly::constant((par.n - rfn(2)) * rfn(1, 2)));
    full.add(Atom::DuDauxSym, UPoly::constant(rfn(1, 4)), "H");
    full.add(Atom::Metric, grad_inner(UPoly::u_pow(1), htrace, geo) * rfn(-1, 4));
    CHECK(trace(full, par, &h0) == mixed.trace_g);

    // Rejects inputs with nonzero divergence.
    BasisCoeffs bad(kBasisDim, RatFn());
    bad[1] = RatFn(1);
    CHECK_THROWS_AS(phi_st_mixed(bad, par), std::invalid_argument);

    // Zero input gives zero trace.
    BasisCoeffs zero(kBasisDim, RatFn());
    CHECK(phi_st_mixed(zero, par).trace_g.is_zero());
}

TEST_CASE("FD validation of the conformal Ricci variations") {
    Chart chart = Chart::cp_odd(2);
    Rng rng(211);
    FDConfig cfg;
    cfg.step = 1e-3;
    cfg.richardson = true;
    for (int trial = 0; trial < 4; ++trial) {
        ChartPoint p = random_point(chart, rng, 0.5);
        VariationCheck c1 = fd_validate_variation(1, chart, p, cfg);
        CHECK(c1.error <= 1e-5 * std::max(1.0, c1.scale));
        VariationCheck c2 = fd_validate_variation(2, chart, p, cfg);
        CHECK(c2.error <= 1e-4 * std::max(1.0, c2.scale));
    }
}

TEST_CASE("first variation on the invariant space") {
    Chart chart = Chart::cp_odd(2);
    Rng rng(307);
    double step = 1e-4;

    // 2 Phi'(lam^2 g) = L(lam^2 g) = lam^2 g.
    ChartPoint p = random_point(chart, rng, 0.5);
    TensorValue lhs = two_phi_prime_basis(chart, p, 0, 2, step);
    TensorValue rhs = realize_basis_element(chart, p, 0);
    CHECK(tensor_max_abs_diff(lhs, rhs) <= 1e-5 * std::max(1.0, tensor_max_abs(rhs)));

    // 2 Phi'(h0) = L h0 = 2 rhs.
    BasisCoeffs h0 = solve_h0();
    BasisCoeffs rhs_vec = second_order_rhs();
    for (int trial = 0; trial < 3; ++trial) {
        ChartPoint q = random_point(chart, rng, 0.5);
        TensorValue img = two_phi_prime(chart, q, h0, 2, step);
        TensorValue expect = realize_basis(chart, q, eval_coeffs(rhs_vec, 2)) * 2.0;
        CHECK(tensor_max_abs_diff(img, expect) <= 1e-4 * std::max(1.0, tensor_max_abs(expect)));
    }

    // Pure gauge directions are annihilated: h = delta*(u du) realized as
    // -(e3 + e4 + e5).
    BasisCoeffs gauge(kBasisDim, RatFn());
    gauge[2] = rfn(-1);
    gauge[3] = rfn(-1);
    gauge[4] = rfn(-1);
    for (int trial = 0; trial < 3; ++trial) {
        ChartPoint q = random_point(chart, rng, 0.5);
        TensorValue img = two_phi_prime(chart, q, gauge, 2, step);
        CHECK(tensor_max_abs(img) <= 1e-4);
    }
}

TEST_CASE("self-adjointness of the first variation, Monte Carlo") {
    Chart chart = Chart::cp_odd(2);
    double step = 1e-4;
    std::vector<std::pair<int, int>> pairs = {{1, 3}, {2, 4}};
    for (auto [a, b] : pairs) {
        BasisCoeffs ea(kBasisDim, RatFn()), eb(kBasisDim, RatFn());
        ea[a] = RatFn(1);
        eb[b] = RatFn(1);
        auto f = [&](const ChartPoint& p) {
            MetricData md = metric_at(chart, p);
            TensorValue pa = two_phi_prime(chart, p, ea, 2, step);
            TensorValue pb = two_phi_prime(chart, p, eb, 2, step);
            TensorValue va = realize_basis_element(chart, p, a);
            TensorValue vb = realize_basis_element(chart, p, b);
            return tensor_inner(md, pa, vb) - tensor_inner(md, va, pb);
        };
        McEstimate est = mc_integrate(chart, f, 400, 7, 2);
        CHECK(std::abs(est.mean) <= 3 * est.se + 1e-4);
    }
}

TEST_CASE("conformal kernel fields are annihilated by the operator") {
    Chart chart = Chart::cp_odd(2);
    Rng rng(401);

    // The balanced eigenfunction and a skew diagonal one.
    DiagEigen u = DiagEigen::balanced(2);
    DiagEigen v;
    v.h = {3, -1, -1, -1};
    for (int trial = 0; trial < 5; ++trial) {
        ChartPoint p = random_point(chart, rng, 0.5);
        CHECK(tensor_max_abs(l_of_conformal_kernel_field(chart, p, u, 1e-4)) <= 1e-4);
        CHECK(tensor_max_abs(l_of_conformal_kernel_field(chart, p, v, 1e-4)) <= 1e-4);
    }

    // The Hessian of u alone is annihilated as well.
    for (int trial = 0; trial < 5; ++trial) {
        ChartPoint p = random_point(chart, rng, 0.5);
        CTensorField field = [&chart, &u](const ChartPoint& q) {
            return CTensor::from_tensor_value(u.hess_tensor(q));
        };
        TensorValue lap = rough_laplacian(chart, field, p, 1e-4).to_tensor_value();
        MetricData md = metric_at(chart, p);
        TensorValue img = lap + rm_action(md, u.hess_tensor(p)) * 2.0;
        CHECK(tensor_max_abs(img) <= 1e-4);
    }
}
