// Assembly of the third-order obstruction for CP^{2m-1}: the two integral
// contributions and their sum as exact rational functions of m, the reduction
// to the distinguished second-order deformation, and the exact second-order
// landscape over diagonal directions.

#pragma once

#include <vector>

#include "cpnv/eigenfunction.hpp"
#include "cpnv/upoly.hpp"
#include "cpnv/variational.hpp"

namespace cpnv {

// An integrand reduced to the span of {u^4, lam^2 u^2}; integrals of every
// intermediate in the chain live here.
struct MomentForm {
    RatFn u4;
    RatFn lam2u2;

    bool operator==(const MomentForm& o) const { return u4 == o.u4 && lam2u2 == o.lam2u2; }
};

// Exact value of the averaged integrand as the coefficient of Vol * lam^4.
RatFn moment_form_value(const MomentForm& f);

// Reduce a scalar that lies in span{u^4, lam^2 u^2}; throws otherwise.
MomentForm as_moment_form(const UPoly& p);

// Contribution of the third-variation scalar: the integrand -2u (Delta+1/2) f.
MomentForm compute_i11();
// Contribution of the remaining third-variation terms paired with u g.
MomentForm compute_i12();
// Their averaged sum.
RatFn compute_i1();

// The pairing of the second-order deformation with the Hessian of u.
MomentForm compute_i21();
// Full cross contribution (three times the cross trace integral).
RatFn compute_i2();

struct ObstructionReport {
    MomentForm i11, i12, i21;
    UPoly h0_trace;
    RatFn i1, i2, total;
    bool nonzero_all_m_ge2;
};

ObstructionReport total_obstruction();

// The two computable legs of the reduction that confines the obstruction to
// the distinguished deformation: the eigenfunction cross term collapses to a
// multiple of avg(u^2 v), which vanishes for every admissible v, and the
// diffeomorphism-gauge leg is accepted from theory (not re-verified here).
struct ReductionChecklist {
    RatFn cross_coefficient;     // multiple of avg(u^2 v); equals 4(m-1)
    bool pairings_vanish;        // avg(u^2 v) = 0 over the diagonal basis, m = 2..4
    bool gauge_leg_trusted;      // recorded as an assumption
};
ReductionChecklist reduction_to_h0();

// Exhaustive exact search over sign-pattern directions on CP^{n_complex}:
// a direction survives the second-order pairing test iff its coefficient
// vector is balanced (equal moduli, signs summing to zero).
struct SecondOrderOutcome {
    int n_complex;
    long patterns_checked;
    bool any_unobstructed;
    bool unobstructed_exactly_balanced;
};
SecondOrderOutcome second_order_criterion(int n_complex);

// True iff independent diagonal pairings vanish for the direction with the
// given traceless coefficient vector (slots of CP^{d-1}).
bool direction_unobstructed(const std::vector<Rat>& coeffs);

}  // namespace cpnv
