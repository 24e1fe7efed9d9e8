#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cpnv/basis.hpp"
#include "cpnv/fd.hpp"

using namespace cpnv;

namespace {

RatFn m() { return RatFn::var(); }

ChartPoint random_point(const Chart& chart, Rng& rng, double radius = 0.7) {
    std::vector<cd> z(chart.N);
    for (auto& zi : z) zi = radius * cd(2 * rng.uniform01() - 1, 2 * rng.uniform01() - 1);
    return chart.point(std::move(z));
}

}  // namespace

TEST_CASE("the operator matrix columns") {
    RatMatrix a = l_matrix();

    // column 1: L(lam^2 g) = lam^2 g
    CHECK(a.at(0, 0) == rfn(1));
    for (int i = 1; i < 5; ++i) CHECK(a.at(i, 0).is_zero());

    // column 2: (1/m, -1-1/m, 0, 0, 0)
    CHECK(a.at(0, 1) == rfn(1) / m());
    CHECK(a.at(1, 1) == -(rfn(1) + rfn(1) / m()));
    CHECK(a.at(2, 1).is_zero());

    // column 5 diagonal: -1/m - 1
    CHECK(a.at(4, 4) == -(rfn(1) + rfn(1) / m()));
    for (int i = 0; i < 4; ++i) CHECK(a.at(i, 4).is_zero());
}

TEST_CASE("columns 2, 3, 4 re-derived from the scalar pipeline") {
    Params geo = Params::cp_odd();
    RatMatrix a = l_matrix();

    // L(u^2 g) = (lap u^2) g + u^2 g, coefficients in span{lam^2 g, u^2 g}.
    UPoly lap_u2 = laplacian(UPoly::u_pow(2), geo) + UPoly::u_pow(2);
    CHECK(lap_u2.coeff(0, 1) == a.at(0, 1));
    CHECK(lap_u2.coeff(2, 0) == a.at(1, 1));

    // L(e3) = -e3 + 2 xi + (1/(2m)) e3 + ((lam^2-u^2)/(8m^2)) g: assemble from
    // the xi combination and compare with column 3.
    BasisCoeffs xi = xi_in_basis();
    RatFn inv8m2 = rfn(1, 8) / (m() * m());
    BasisCoeffs col3 = {xi[0] * rat(2) + inv8m2, xi[1] * rat(2) - inv8m2,
                        rfn(-1) + xi[2] * rat(2) + rfn(1, 2) / m(), xi[3] * rat(2), RatFn()};
    for (int i = 0; i < 5; ++i) CHECK(col3[i] == a.at(i, 2));

    // L(e4) = hess(|grad u|^2) - 2 xi - 2 Rm(du x du) - e4.  With
    // psi = |grad u|^2: hess psi = psi' hess u + psi'' du du = -(1/m)(e4 + e3 + e5),
    // and Rm(e3) = (1/(4m)) e3 + (1/(16m^2))(e1 - e2), Rm(e5) = -(1/(2m)) e5
    // (the e5 parts cancel, consistent with type preservation).
    RatFn invm = rfn(1) / m();
    BasisCoeffs rm_e3 = {rfn(1, 16) / (m() * m()), -rfn(1, 16) / (m() * m()), rfn(1, 4) / m(),
                         RatFn(), RatFn()};
    BasisCoeffs derived4(5);
    derived4[0] = -xi[0] * rat(2) - rm_e3[0] * rat(2);
    derived4[1] = -xi[1] * rat(2) - rm_e3[1] * rat(2);
    derived4[2] = -invm - xi[2] * rat(2) - rm_e3[2] * rat(2);
    derived4[3] = -invm - xi[3] * rat(2) - rfn(1);
    derived4[4] = RatFn();
    for (int i = 0; i < 5; ++i) CHECK(derived4[i] == a.at(i, 3));

    // L(e5): the Bochner term -e5 (its hessian-square part lands in the other
    // type and vanishes) plus 2 Rm(e5) = -(1/m) e5.
    CHECK(a.at(4, 4) == -rfn(1) - invm);
}

TEST_CASE("inverse of the operator matrix") {
    RatMatrix inv = l_inverse();
    CHECK(l_matrix() * inv == RatMatrix::identity(5));
    CHECK(inv * l_matrix() == RatMatrix::identity(5));

    // The (3,3) entry is m^2/(1-m^2).
    CHECK(inv.at(2, 2) == (m() * m()) / (rfn(1) - m() * m()));

    // Finite at m = 2, pole at m = 1.
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK_NOTHROW(inv.at(i, j).eval(2));
    CHECK_THROWS_AS(inv.at(2, 2).eval(1), std::domain_error);
}

TEST_CASE("the distinguished second-order deformation") {
    BasisCoeffs h0 = solve_h0();
    RatFn mp1 = m() + rfn(1), den = mp1 * (rfn(3) * m() + rfn(2));

    CHECK(h0[0] == rfn(-2) / mp1);
    CHECK(h0[1] == rfn(2) * m() / mp1);
    CHECK(h0[2] == rfn(4) * m() * (m() * m() + rfn(5) * m() + rfn(2)) / den);
    CHECK(h0[3] == rfn(-8) * m() * m() * m() / den);
    CHECK(h0[4] == rfn(4) * m() * m() * (m() + rfn(2)) / den);

    // Round trip: L (h0/2) = rhs.
    BasisCoeffs half(kBasisDim);
    for (int i = 0; i < kBasisDim; ++i) half[i] = h0[i] * rat(1, 2);
    BasisCoeffs image = l_matrix() * half;
    BasisCoeffs rhs = second_order_rhs();
    for (int i = 0; i < kBasisDim; ++i) CHECK(image[i] == rhs[i]);

    // Values at m = 2.
    std::vector<Rat> expect = {rat(-2, 3), rat(4, 3), rat(16, 3), rat(-8, 3), rat(8, 3)};
    for (int i = 0; i < kBasisDim; ++i) CHECK(h0[i].eval(2) == expect[i]);
}

TEST_CASE("divergence table and the vanishing combination") {
    BasisCoeffs d = divergence_coeffs();
    CHECK(d[0].is_zero());
    CHECK(d[1] == rfn(2));
    CHECK(d[2] == rfn(-1, 2));
    CHECK(d[3] == -(rfn(1, 2) / m() + rfn(1, 2)));
    CHECK(d[4] == d[3]);

    CHECK(divergence_of(solve_h0()).is_zero());

    // The vanishing coefficient combination, term by term.
    RatFn mp1 = m() + rfn(1), den3 = rfn(3) * m() + rfn(2);
    RatFn combo = rfn(4) * m() / mp1 - rfn(2) * m() * (m() * m() + rfn(5) * m() + rfn(2)) / (mp1 * den3) +
                  rfn(4) * m() * m() / den3 - rfn(2) * m() * (m() + rfn(2)) / den3;
    CHECK(combo.is_zero());
}

TEST_CASE("trace of the deformation and hessian pairings") {
    BasisCoeffs h0 = solve_h0();
    UPoly h0_trace = basis_trace(h0);
    RatFn den = (m() + rfn(1)) * (rfn(3) * m() + rfn(2));
    CHECK(h0_trace.coeff(0, 1) ==
          rfn(-2) * (rfn(11) * m() * m() - rfn(3) * m() - rfn(6)) / den);
    CHECK(h0_trace.coeff(2, 0) ==
          rfn(2) * (rfn(16) * m() * m() * m() + m() * m() - rfn(9) * m() - rfn(2)) / den);

    // |hess u|^2 = ((m-1) lam^2 + (m+1) u^2) / (4 m^2).
    UPoly hn = hess_u_norm_squared();
    RatFn inv4m2 = rfn(1, 4) / (m() * m());
    CHECK(hn.coeff(0, 1) == (m() - rfn(1)) * inv4m2);
    CHECK(hn.coeff(2, 0) == (m() + rfn(1)) * inv4m2);

    // <e3, hess u> = -u (lam^2 - u^2) / (4 m^2).
    BasisCoeffs e3(kBasisDim, RatFn());
    e3[2] = RatFn(1);
    UPoly p = basis_inner_hess_u(e3);
    CHECK(p.coeff(1, 1) == -inv4m2);
    CHECK(p.coeff(3, 0) == inv4m2);
}

TEST_CASE("pointwise realization against exact values") {
    Chart chart = Chart::cp_odd(2);
    ChartPoint origin = chart.point({cd(0, 0), cd(0, 0), cd(0, 0)});

    TensorValue e1 = realize_basis_element(chart, origin, 0);
    for (int i = 0; i < chart.N; ++i)
        for (int j = 0; j < chart.N; ++j) {
            cd expect = (i == j) ? cd(8, 0) : cd(0, 0);
            CHECK(std::abs(e1.herm[i][j] - expect) < 1e-15);
            CHECK(std::abs(e1.holo[i][j]) < 1e-15);
        }

    TensorValue e5 = realize_basis_element(chart, origin, 4);
    CHECK(tensor_max_abs(e5) < 1e-15);  // grad u vanishes at the origin

    // trace of realized h0 equals the closed-form trace at random points.
    Rng rng(13);
    BasisCoeffs h0 = solve_h0();
    UPoly h0_trace = basis_trace(h0);
    std::vector<double> coeffs = eval_coeffs(h0, 2);
    DiagEigen u = DiagEigen::balanced(2);
    for (int trial = 0; trial < 30; ++trial) {
        ChartPoint p = random_point(chart, rng);
        MetricData md = metric_at(chart, p);
        double lhs = tensor_trace(md, realize_basis(chart, p, coeffs));
        double rhs = h0_trace.eval_double(u.value(p), 1.0, 2.0);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
    }

    // <h0, hess u> realized equals its scalar reduction at random points.
    UPoly h0_dot = basis_inner_hess_u(h0);
    for (int trial = 0; trial < 30; ++trial) {
        ChartPoint p = random_point(chart, rng);
        MetricData md = metric_at(chart, p);
        double lhs = tensor_inner(md, realize_basis(chart, p, coeffs), u.hess_tensor(p));
        double rhs = h0_dot.eval_double(u.value(p), 1.0, 2.0);
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("FD validation of every operator matrix column") {
    Chart chart = Chart::cp_odd(2);
    Rng rng(101);
    RatMatrix a = l_matrix();
    double step = 1e-4;
    for (int trial = 0; trial < 10; ++trial) {
        ChartPoint p = random_point(chart, rng, 0.6);
        for (int k = 0; k < kBasisDim; ++k) {
            CTensorField field = [&chart, k](const ChartPoint& q) {
                return CTensor::from_tensor_value(realize_basis_element(chart, q, k));
            };
            TensorValue lap = rough_laplacian(chart, field, p, step).to_tensor_value();
            MetricData md = metric_at(chart, p);
            TensorValue lhs = lap + rm_action(md, realize_basis_element(chart, p, k)) * 2.0;

            std::vector<double> pred_coeffs(kBasisDim);
            for (int i = 0; i < kBasisDim; ++i) pred_coeffs[i] = rat_double(a.at(i, k).eval(2));
            TensorValue rhs = realize_basis(chart, p, pred_coeffs);
            CHECK(tensor_max_abs_diff(lhs, rhs) <= 1e-4 * std::max(1.0, tensor_max_abs(rhs)));
        }
    }
}

TEST_CASE("type preservation of the operator") {
    Chart chart = Chart::cp_odd(2);
    Rng rng(55);
    double step = 1e-4;
    for (int trial = 0; trial < 3; ++trial) {
        ChartPoint p = random_point(chart, rng, 0.6);
        MetricData md = metric_at(chart, p);

        // L of a (1,1) field has no (2,0) part ...
        CTensorField f11 = [&chart](const ChartPoint& q) {
            return CTensor::from_tensor_value(realize_basis_element(chart, q, 2));
        };
        TensorValue l11 = rough_laplacian(chart, f11, p, step).to_tensor_value() +
                          rm_action(md, realize_basis_element(chart, p, 2)) * 2.0;
        double holo_part = 0;
        for (int i = 0; i < chart.N; ++i)
            for (int j = 0; j < chart.N; ++j) holo_part = std::max(holo_part, std::abs(l11.holo[i][j]));
        CHECK(holo_part <= 1e-6);

        // ... and L of a (2,0)+(0,2) field has no (1,1) part.
        CTensorField f20 = [&chart](const ChartPoint& q) {
            return CTensor::from_tensor_value(realize_basis_element(chart, q, 4));
        };
        TensorValue l20 = rough_laplacian(chart, f20, p, step).to_tensor_value() +
                          rm_action(md, realize_basis_element(chart, p, 4)) * 2.0;
        double herm_part = 0;
        for (int i = 0; i < chart.N; ++i)
            for (int j = 0; j < chart.N; ++j) herm_part = std::max(herm_part, std::abs(l20.herm[i][j]));
        CHECK(herm_part <= 1e-6);
    }
}

TEST_CASE("numeric divergence of the realized solution vanishes") {
    Chart chart = Chart::cp_odd(2);
    Rng rng(77);
    std::vector<double> coeffs = eval_coeffs(solve_h0(), 2);
    CTensorField field = [&chart, &coeffs](const ChartPoint& q) {
        return CTensor::from_tensor_value(realize_basis(chart, q, coeffs));
    };
    for (int trial = 0; trial < 20; ++trial) {
        ChartPoint p = random_point(chart, rng, 0.6);
        std::vector<cd> div = divergence(chart, field, p, 1e-4);
        for (const cd& v : div) CHECK(std::abs(v) <= 1e-5);
    }

    // Per-element check of the divergence table: delta(e_k) = c_k u grad u.
    DiagEigen u = DiagEigen::balanced(2);
    BasisCoeffs dc = divergence_coeffs();
    for (int trial = 0; trial < 5; ++trial) {
        ChartPoint p = random_point(chart, rng, 0.6);
        std::vector<cd> du = u.grad(p);
        double uval = u.value(p);
        for (int k = 0; k < kBasisDim; ++k) {
            CTensorField fk = [&chart, k](const ChartPoint& q) {
                return CTensor::from_tensor_value(realize_basis_element(chart, q, k));
            };
            std::vector<cd> div = divergence(chart, fk, p, 1e-4);
            double ck = rat_double(dc[k].eval(2));
            for (int i = 0; i < chart.N; ++i) CHECK(std::abs(div[i] - ck * uval * du[i]) <= 1e-5);
        }
    }
}
