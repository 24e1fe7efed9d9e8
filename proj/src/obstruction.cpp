#include "cpnv/obstruction.hpp"

#include <stdexcept>

#include "cpnv/basis.hpp"

namespace cpnv {

namespace {

RatFn m() { return RatFn::var(); }

}  // namespace

RatFn moment_form_value(const MomentForm& f) {
    Params par = Params::cp_odd();
    return f.u4 * moment_u_pow(4, par) + f.lam2u2 * moment_u_pow(2, par);
}

MomentForm as_moment_form(const UPoly& p) {
    MomentForm f;
    for (const auto& [k, v] : p.terms()) {
        if (k.first == 4 && k.second == 0)
            f.u4 = v;
        else if (k.first == 2 && k.second == 1)
            f.lam2u2 = v;
        else
            throw std::invalid_argument("as_moment_form: term outside span{u^4, lam^2 u^2}");
    }
    return f;
}

MomentForm compute_i11() {
    Params par = Params::cp_odd();
    TensorExpr e = phi_ttt(par);
    const UPoly& f_ttt = e.aux_scalars.at("f_ttt");
    UPoly u = UPoly::u_pow(1);
    UPoly rhs = laplacian(f_ttt, par) + f_ttt * rfn(1, 2);
    return as_moment_form(u * rhs * rfn(-2));
}

MomentForm compute_i12() {
    Params par = Params::cp_odd();
    TensorExpr e = phi_ttt(par);
    TensorExpr rest;
    rest.aux_scalars = e.aux_scalars;
    for (const Term& t : e.terms)
        if (!(t.atom == Atom::HessAux && t.aux == "f_ttt")) rest.terms.push_back(t);
    return as_moment_form(UPoly::u_pow(1) * trace(rest, par));
}

RatFn compute_i1() { return moment_form_value(compute_i11()) + moment_form_value(compute_i12()); }

MomentForm compute_i21() {
    return as_moment_form(UPoly::u_pow(1) * basis_inner_hess_u(solve_h0()));
}

RatFn compute_i2() {
    Params par = Params::cp_odd();
    BasisCoeffs h0 = solve_h0();

    // Route one: -2(m-1) I21 + avg(u^2 H0)/2, scaled by three.
    RatFn i21 = moment_form_value(compute_i21());
    UPoly u2_h0trace = UPoly::u_pow(2) * basis_trace(h0);
    RatFn half_trace_avg = integrate_avg(u2_h0trace, par).coeff(2) * rat(1, 2);
    RatFn route_one = (rfn(-2) * (m() - rfn(1)) * i21 + half_trace_avg) * rfn(3);

    // Route two: integrate the full mixed-variation trace against u.
    MixedPhiSt mixed = phi_st_mixed(h0, par);
    RatFn route_two = integrate_avg(UPoly::u_pow(1) * mixed.trace_g, par).coeff(2) * rfn(3);

    if (!(route_one == route_two))
        throw std::logic_error("compute_i2: the two assembly routes disagree");
    return route_one;
}

ObstructionReport total_obstruction() {
    ObstructionReport r;
    r.i11 = compute_i11();
    r.i12 = compute_i12();
    r.i21 = compute_i21();
    r.h0_trace = basis_trace(solve_h0());
    r.i1 = compute_i1();
    r.i2 = compute_i2();
    r.total = r.i1 + r.i2;
    // Sign certificate on [2, inf): numerator strictly negative, denominator
    // strictly positive.
    r.nonzero_all_m_ge2 =
        poly_positive_from(-r.total.num(), rat(2)) && poly_positive_from(r.total.den(), rat(2));
    return r;
}

ReductionChecklist reduction_to_h0() {
    ReductionChecklist c;
    c.cross_coefficient = phi_st_u_weighted_integral(phi_st_conformal(Params::cp_odd()));
    c.pairings_vanish = true;
    for (int mm = 2; mm <= 4; ++mm) {
        std::vector<Rat> u(2 * mm, rat(-1));
        for (int a = 0; a < mm; ++a) u[a] = rat(1);
        for (int k = 0; k + 1 < 2 * mm; ++k) {
            std::vector<Rat> w(2 * mm, rat(0));
            w[k] = rat(1);
            w[k + 1] = rat(-1);
            if (criterion_integral(u, w) != 0) c.pairings_vanish = false;
        }
    }
    c.gauge_leg_trusted = true;
    return c;
}

bool direction_unobstructed(const std::vector<Rat>& coeffs) {
    size_t d = coeffs.size();
    for (size_t k = 0; k + 1 < d; ++k) {
        std::vector<Rat> w(d, rat(0));
        w[k] = rat(1);
        w[k + 1] = rat(-1);
        if (criterion_integral(coeffs, w) != 0) return false;
    }
    return true;
}

SecondOrderOutcome second_order_criterion(int n_complex) {
    if (n_complex < 1) throw std::invalid_argument("second_order_criterion: dimension must be >= 1");
    int d = n_complex + 1;
    if (d > 16) throw std::invalid_argument("second_order_criterion: too many slots for exhaustion");

    SecondOrderOutcome out;
    out.n_complex = n_complex;
    out.patterns_checked = 0;
    out.any_unobstructed = false;
    out.unobstructed_exactly_balanced = true;

    for (long mask = 0; mask < (1L << d); ++mask) {
        long plus = __builtin_popcountl(static_cast<unsigned long>(mask));
        long sum = 2 * plus - d;
        if (plus == 0 || plus == d) continue;  // projects to zero
        std::vector<Rat> a(d);
        for (int i = 0; i < d; ++i) {
            long eps = (mask >> i) & 1 ? 1 : -1;
            a[i] = rat(eps) - rat(sum, d);
        }
        ++out.patterns_checked;
        bool unobstructed = direction_unobstructed(a);
        bool balanced = (sum == 0);
        if (unobstructed) out.any_unobstructed = true;
        if (unobstructed != balanced) out.unobstructed_exactly_balanced = false;
    }
    return out;
}

}  // namespace cpnv
