#include "cpnv/product.hpp"

#include <cmath>
#include <stdexcept>

#include "cpnv/eigenfunction.hpp"
#include "cpnv/fd.hpp"

namespace cpnv {

namespace {

RatFn m() { return RatFn::var(); }

}  // namespace

void ProductConfig::validate() const {
    if (m < 1) throw std::invalid_argument("ProductConfig: m must be >= 1");
    if (n2 < 1) throw std::invalid_argument("ProductConfig: dim M2 must be >= 1 (lambda would vanish)");
}

QuadScalar QuadScalar::operator+(const QuadScalar& o) const {
    return {u2 + o.u2, v2 + o.v2, uv + o.uv, guu + o.guu, guv + o.guv, gvv + o.gvv};
}

QuadScalar QuadScalar::operator*(const RatFn& s) const {
    return {u2 * s, v2 * s, uv * s, guu * s, guv * s, gvv * s};
}

CrossProductPhi cross_phi2_product(long n2) {
    RatFn n1 = rfn(4) * m();
    RatFn n = n1 + rfn(n2);

    CrossProductPhi c;
    c.dudv_sym = -(n1 - rfn(2)) * rfn(1, 4);
    c.u_hess_v_sym = -(n1 - rfn(2)) * rfn(1, 2);
    c.metric_g = {RatFn(), RatFn(), rfn(1, 2), RatFn(), RatFn(), RatFn()};
    c.metric_g1 = {RatFn(), RatFn(), rfn(1, 2), RatFn(), -rfn(1), RatFn()};
    c.f_rhs = {RatFn(), RatFn(), n1 * rfn(1, 2), RatFn(), -(rfn(3) * n1 - rfn(2)) * rfn(1, 4), RatFn()};

    // Trace rules: <g, g> = n, <g1, g> = <g1, g1> = <g, g1> = n1,
    // <du dv + dv du, .> = 2 <grad u, grad v>, <u hess v + v hess u, .> = -2uv.
    QuadScalar dudv_tr = QuadScalar{RatFn(), RatFn(), RatFn(), RatFn(), rfn(2), RatFn()} * c.dudv_sym;
    QuadScalar hess_tr = QuadScalar{RatFn(), RatFn(), rfn(-2), RatFn(), RatFn(), RatFn()} * c.u_hess_v_sym;
    c.trace_g = c.metric_g * n + c.metric_g1 * n1 + dudv_tr + hess_tr;
    c.trace_g1 = c.metric_g * n1 + c.metric_g1 * n1 + dudv_tr + hess_tr;
    return c;
}

TraceIntegrals w_integral(const QuadScalar& trace, const QuadScalar& f_rhs) {
    auto apply = [](const QuadScalar& s) {
        return TraceIntegrals{s.u2 + s.guu * rat(1, 2), s.v2 + s.gvv * rat(1, 2),
                              s.uv + s.guv * rat(1, 2)};
    };
    TraceIntegrals t = apply(trace), f = apply(f_rhs);
    return {t.u2w - rfn(2) * f.u2w, t.v2w - rfn(2) * f.v2w, t.uvw - rfn(2) * f.uvw};
}

namespace {

// Trace records of the pure conformal second variation (1+tu)g of an
// Einstein-1/2 manifold of dimension dim, in the u-slots.
void conformal_trace(const RatFn& dim, QuadScalar& trace, QuadScalar& f_rhs) {
    trace = {rfn(2) * (dim - rfn(1)), RatFn(), RatFn(), -(rfn(3) * dim - rfn(2)) * rfn(1, 2), RatFn(),
             RatFn()};
    f_rhs = {dim * rfn(1, 2), RatFn(), RatFn(), -(rfn(3) * dim - rfn(2)) * rfn(1, 4), RatFn(), RatFn()};
}

QuadScalar swap_uv(const QuadScalar& s) { return {s.v2, s.u2, s.uv, s.gvv, s.guv, s.guu}; }

}  // namespace

ObstructionCoefficients obstruction_coefficients(long n2) {
    RatFn n1 = rfn(4) * m();
    RatFn n = n1 + rfn(n2);

    // Pairing of Phi2(ug, ug) with w g and with w g1.
    QuadScalar uu_trace_g, uu_f_rhs;
    conformal_trace(n, uu_trace_g, uu_f_rhs);
    // Against g1: -lap f + (n1 + n - 2) u^2 - ((n-2)/2 + n1) |grad u|^2.
    QuadScalar uu_trace_g1 = {n1 + n - rfn(2), RatFn(), RatFn(), -(n - rfn(2)) * rfn(1, 2) - n1,
                              RatFn(), RatFn()};

    // Pairing of Phi2(v g1, v g1): the conformal variation of the CP factor
    // alone, so the dimension is n1 and both traces agree.
    QuadScalar vv_trace, vv_f_rhs;
    conformal_trace(n1, vv_trace, vv_f_rhs);
    vv_trace = swap_uv(vv_trace);
    vv_f_rhs = swap_uv(vv_f_rhs);

    // Cross pairing, entering the decomposition twice.
    CrossProductPhi cross = cross_phi2_product(n2);

    auto add = [](const TraceIntegrals& a, const TraceIntegrals& b) {
        return TraceIntegrals{a.u2w + b.u2w, a.v2w + b.v2w, a.uvw + b.uvw};
    };
    auto twice = [](const TraceIntegrals& a) {
        return TraceIntegrals{a.u2w * rat(2), a.v2w * rat(2), a.uvw * rat(2)};
    };

    ObstructionCoefficients out;
    out.with_g = add(add(w_integral(uu_trace_g, uu_f_rhs), w_integral(vv_trace, vv_f_rhs)),
                     twice(w_integral(cross.trace_g, cross.f_rhs)));
    out.with_g1 = add(add(w_integral(uu_trace_g1, uu_f_rhs), w_integral(vv_trace, vv_f_rhs)),
                      twice(w_integral(cross.trace_g1, cross.f_rhs)));
    return out;
}

PsiForms psi_forms(long n2) {
    ObstructionCoefficients oc = obstruction_coefficients(n2);
    RatFn norm = rfn(2) * (rfn(2) * m() - rfn(1));  // 2(2m-1), the v^2 coefficient
    PsiForms p;
    p.psi1_u2 = oc.with_g.u2w / norm;
    p.psi1_v2 = oc.with_g.v2w / norm;
    p.psi1_uv = oc.with_g.uvw / norm;
    p.psi2_u2 = oc.with_g1.u2w / norm;
    p.psi2_v2 = oc.with_g1.v2w / norm;
    p.psi2_uv = oc.with_g1.uvw / norm;
    return p;
}

QuadExt QuadExt::operator+(const QuadExt& o) const { return {a + o.a, b + o.b, disc}; }
QuadExt QuadExt::operator-(const QuadExt& o) const { return {a - o.a, b - o.b, disc}; }

QuadExt QuadExt::operator*(const QuadExt& o) const {
    return {a * o.a + b * o.b * disc, a * o.b + b * o.a, disc};
}

QuadExt QuadExt::operator/(const QuadExt& o) const {
    RatFn denom = o.a * o.a - o.b * o.b * disc;
    if (denom.is_zero()) throw std::domain_error("QuadExt: division by zero element");
    QuadExt conj{o.a, -o.b, disc};
    QuadExt num = *this * conj;
    return {num.a / denom, num.b / denom, disc};
}

bool QuadExt::operator==(const QuadExt& o) const { return a == o.a && b == o.b; }

namespace {

RootIdentityResult root_identity_core(const RatFn& lambda, const RatFn& psi1_u2, const RatFn& psi1_v2,
                                      const RatFn& psi1_uv, const RatFn& psi2_u2, const RatFn& psi2_v2,
                                      const RatFn& psi2_uv) {
    if (lambda.is_zero()) throw std::domain_error("root_identity_check: lambda must be nonzero");
    RatFn disc = rfn(1) + rfn(4) * lambda;
    QuadExt half = QuadExt::of(rfn(1, 2), RatFn(), disc);
    QuadExt root = QuadExt::of(RatFn(), rfn(1), disc);
    QuadExt lam = QuadExt::of(lambda, RatFn(), disc);
    QuadExt one = QuadExt::of(rfn(1), RatFn(), disc);

    RootIdentityResult r;
    r.x = half * (one + root);
    r.y = half * (one - root);

    auto check_one = [&](const QuadExt& root_val) {
        // (root u + v)^2 = -(other/lambda) psi1 + (1 + other/lambda) psi2,
        // where other is the conjugate root.
        QuadExt other = one - root_val;
        QuadExt c1 = QuadExt::of(RatFn(), RatFn(), disc) - other / lam;  // -(other/lambda)
        QuadExt c2 = one + other / lam;
        QuadExt u2 = c1 * QuadExt::of(psi1_u2, RatFn(), disc) + c2 * QuadExt::of(psi2_u2, RatFn(), disc);
        QuadExt v2 = c1 * QuadExt::of(psi1_v2, RatFn(), disc) + c2 * QuadExt::of(psi2_v2, RatFn(), disc);
        QuadExt uv = c1 * QuadExt::of(psi1_uv, RatFn(), disc) + c2 * QuadExt::of(psi2_uv, RatFn(), disc);
        return u2 == root_val * root_val && v2 == one && uv == root_val + root_val;
    };
    r.identities_hold = check_one(r.x) && check_one(r.y);

    // [x 1; y 1] (u, v)^T = 0 has only the trivial solution iff x != y.
    r.conclusion_trivial = !(r.x - r.y).is_zero();
    return r;
}

}  // namespace

RootIdentityResult root_identity_check(const ProductConfig& config) {
    config.validate();
    Rat lam0 = rat(config.n2) / rat(4 * (2 * config.m - 1));
    PsiForms p = psi_forms(config.n2);
    auto at_m = [&](const RatFn& f) { return RatFn(f.eval(config.m)); };
    return root_identity_core(RatFn(lam0), at_m(p.psi1_u2), at_m(p.psi1_v2), at_m(p.psi1_uv),
                              at_m(p.psi2_u2), at_m(p.psi2_v2), at_m(p.psi2_uv));
}

RootIdentityResult root_identity_check_symbolic() {
    // With lambda = n2 / (4(2m-1)) the normalized pairings become
    //   psi1 = (1+2L) u^2 + v^2 + (2+2L) uv,   psi2 = (1+L) u^2 + v^2 + 2 uv,
    // so the identity is a one-variable statement in L.
    RatFn lam = RatFn::var();
    return root_identity_core(lam, rfn(1) + rfn(2) * lam, rfn(1), rfn(2) + rfn(2) * lam,
                              rfn(1) + lam, rfn(1), rfn(2));
}

CommutationResiduals einstein_commutation_check(long m_factor, uint64_t seed, double step) {
    if (m_factor < 1) throw std::invalid_argument("einstein_commutation_check: m must be >= 1");
    Chart chart = Chart::cp(2 * static_cast<int>(m_factor));
    int d = chart.N + 1;
    DiagEigen u;
    u.h.assign(d, -1.0);
    u.h[0] = static_cast<double>(d - 1);

    Rng rng(seed);
    std::vector<cd> z(chart.N);
    for (auto& zi : z) zi = 0.5 * cd(2 * rng.uniform01() - 1, 2 * rng.uniform01() - 1);
    ChartPoint p = chart.point(std::move(z));
    MetricData md = metric_at(chart, p);

    auto grad_sq = [&chart, &u](const ChartPoint& q) {
        MetricData mq = metric_at(chart, q);
        std::vector<cd> du = u.grad(q);
        cd acc(0, 0);
        for (int i = 0; i < chart.N; ++i)
            for (int j = 0; j < chart.N; ++j) acc += mq.ginv[i][j] * du[i] * std::conj(du[j]);
        return 2.0 * acc.real();
    };
    auto lap_u2 = [&](const ChartPoint& q) {
        double w = u.value(q);
        return -2.0 * w * w + 2.0 * grad_sq(q);
    };

    CommutationResiduals r{};

    // Trace identity on h = u^2 g: tr(L h) = (Delta + 1) tr h.
    {
        CTensorField h_field = [&chart, &u](const ChartPoint& q) {
            MetricData mq = metric_at(chart, q);
            TensorValue t = TensorValue::zero(chart.N);
            double w = u.value(q);
            for (int i = 0; i < chart.N; ++i)
                for (int j = 0; j < chart.N; ++j) t.herm[i][j] = w * w * mq.g[i][j];
            return CTensor::from_tensor_value(t);
        };
        TensorValue lh = rough_laplacian(chart, h_field, p, step).to_tensor_value();
        double w = u.value(p);
        TensorValue h_at = TensorValue::zero(chart.N);
        for (int i = 0; i < chart.N; ++i)
            for (int j = 0; j < chart.N; ++j) h_at.herm[i][j] = w * w * md.g[i][j];
        lh = lh + rm_action(md, h_at) * 2.0;
        double lhs = tensor_trace(md, lh);

        double n_real = 2.0 * chart.N;
        auto tr_h = [&](const ChartPoint& q) {
            double s = u.value(q);
            return n_real * s * s;
        };
        double rhs = fd_laplacian_scalar(chart, tr_h, p, step) + tr_h(p);
        r.trace_identity = std::abs(lhs - rhs);
    }

    // Divergence identity on h = u^2 g: delta(L h) = (Delta + 1/2)(delta h),
    // with L h = (lap u^2 + u^2) g and delta h = 2 u du known in closed form.
    {
        CTensorField lh_field = [&](const ChartPoint& q) {
            MetricData mq = metric_at(chart, q);
            TensorValue t = TensorValue::zero(chart.N);
            double w = u.value(q);
            double c = lap_u2(q) + w * w;
            for (int i = 0; i < chart.N; ++i)
                for (int j = 0; j < chart.N; ++j) t.herm[i][j] = c * mq.g[i][j];
            return CTensor::from_tensor_value(t);
        };
        std::vector<cd> lhs = divergence(chart, lh_field, p, step);

        CTensorField alpha_field = [&chart, &u](const ChartPoint& q) {
            std::vector<cd> du = u.grad(q);
            double w = u.value(q);
            for (auto& v : du) v *= 2.0 * w;
            return CTensor::from_one_form(du);
        };
        CTensor lap_alpha = rough_laplacian(chart, alpha_field, p, step);
        std::vector<cd> du = u.grad(p);
        double w = u.value(p);
        double diff = 0;
        for (int i = 0; i < chart.N; ++i) {
            cd rhs = lap_alpha.at({i}) + 0.5 * 2.0 * w * du[i];
            diff = std::max(diff, std::abs(lhs[i] - rhs));
        }
        r.divergence_identity = diff;
    }

    // One-form identity with alpha = du: L(delta* alpha) = delta*((Delta+1/2) alpha),
    // and both sides vanish: delta* du = -hess u with L(hess u) = 0, and
    // (Delta + 1/2) du = 0 by the Bochner identity.
    {
        CTensorField hess_field = [&chart, &u](const ChartPoint& q) {
            return CTensor::from_tensor_value(u.hess_tensor(q));
        };
        TensorValue l_hess = rough_laplacian(chart, hess_field, p, step).to_tensor_value() +
                             rm_action(md, u.hess_tensor(p)) * 2.0;
        double left = tensor_max_abs(l_hess);

        CTensorField du_field = [&chart, &u](const ChartPoint& q) {
            return CTensor::from_one_form(u.grad(q));
        };
        CTensor lap_du = rough_laplacian(chart, du_field, p, step);
        std::vector<cd> du = u.grad(p);
        double right = 0;
        for (int i = 0; i < chart.N; ++i) right = std::max(right, std::abs(lap_du.at({i}) + 0.5 * du[i]));
        r.one_form_identity = std::max(left, right);
    }

    return r;
}

}  // namespace cpnv
