// Acceptance runner: one line per criterion, nonzero exit on any failure.
// Usage: acceptance [path-to-cpnverify]   (the path enables the determinism
// criterion; without it that criterion is a failure).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cpnv/basis.hpp"
#include "cpnv/eigenfunction.hpp"
#include "cpnv/harness.hpp"
#include "cpnv/obstruction.hpp"
#include "cpnv/product.hpp"
#include "cpnv/variational.hpp"

using namespace cpnv;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool pass, double seconds,
            const std::string& detail = "") {
    printf("%s  criterion %2d  %-38s (%.2fs)%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
           seconds, detail.empty() ? "" : "  -- ", detail.c_str());
    fflush(stdout);
    if (!pass) ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

RatFn m() { return RatFn::var(); }

ChartPoint random_point(const Chart& chart, Rng& rng, double radius) {
    std::vector<cd> z(chart.N);
    for (auto& zi : z) zi = radius * cd(2 * rng.uniform01() - 1, 2 * rng.uniform01() - 1);
    return chart.point(std::move(z));
}

// 1. Exact second-order deformation with round trips.
void criterion_1() {
    Timer t;
    BasisCoeffs h0 = solve_h0();
    RatFn mp1 = m() + rfn(1), den = mp1 * (rfn(3) * m() + rfn(2));
    bool ok = h0[0] == rfn(-2) / mp1 && h0[1] == rfn(2) * m() / mp1 &&
              h0[2] == rfn(4) * m() * (m() * m() + rfn(5) * m() + rfn(2)) / den &&
              h0[3] == rfn(-8) * m() * m() * m() / den &&
              h0[4] == rfn(4) * m() * m() * (m() + rfn(2)) / den;
    BasisCoeffs half = h0;
    for (RatFn& v : half) v = v * rat(1, 2);
    BasisCoeffs image = l_matrix() * half;
    BasisCoeffs rhs = second_order_rhs();
    for (int i = 0; i < kBasisDim; ++i) ok = ok && image[i] == rhs[i];
    ok = ok && divergence_of(h0).is_zero();
    double sec = t.elapsed();
    report(1, "exact particular solution", ok && sec < 1.0, sec);
}

// 2. Exact obstruction values.
void criterion_2() {
    Timer t;
    ObstructionReport r = total_obstruction();
    RatFn mp1 = m() + rfn(1), q1 = rfn(2) * m() + rfn(1), q3 = rfn(2) * m() + rfn(3),
          d3 = rfn(3) * m() + rfn(2);
    RatFn m2 = m() * m(), m3 = m2 * m(), m4 = m3 * m();
    bool ok =
        r.i1 == rfn(-6) * (rfn(20) * m3 - rfn(15) * m2 - rfn(9) * m() + rfn(6)) / (q1 * q3 * d3) &&
        r.i2 == rfn(6) * (rfn(4) * m4 + rfn(25) * m3 - rfn(32) * m2 - rfn(7) * m() + rfn(14)) /
                    (mp1 * q1 * q3 * d3) &&
        r.total ==
            rfn(-24) * (m() - rfn(1)) * (rfn(4) * m3 - m2 + m() + rfn(2)) / (mp1 * q1 * q3 * d3);
    ok = ok && r.i1.eval(2) == rat(-66, 35) && r.i2.eval(2) == rat(34, 35) &&
         r.total.eval(2) == rat(-32, 35);
    for (long mm = 2; mm <= 50 && ok; ++mm) ok = r.i1.eval(mm) + r.i2.eval(mm) == r.total.eval(mm);
    ok = ok && r.nonzero_all_m_ge2;
    double sec = t.elapsed();
    report(2, "exact obstruction closed forms", ok && sec < 1.0, sec);
}

// 3. Exact intermediate coefficient pairs.
void criterion_3() {
    Timer t;
    RatFn d3 = rfn(3) * m() + rfn(2);
    MomentForm i11 = compute_i11(), i12 = compute_i12(), i21 = compute_i21();
    UPoly h0t = basis_trace(solve_h0());
    RatFn hden = (m() + rfn(1)) * d3;
    bool ok =
        i11.u4 == rfn(3) * (rfn(36) * m() * m() + rfn(3) * m() - rfn(22)) / d3 &&
        i11.lam2u2 == rfn(-3) * (rfn(16) * m() * m() + rfn(7) * m() - rfn(14)) / d3 &&
        i12.u4 == rfn(-6) * (rfn(2) * m() + rfn(3)) * (rfn(5) * m() * m() - m() - rfn(2)) /
                      (m() * d3) &&
        i12.lam2u2 == rfn(-6) * (rfn(2) * m() * m() * m() - rfn(14) * m() * m() + m() + rfn(6)) /
                          (m() * d3) &&
        i21.u4 == -(rfn(8) * m() * m() - rfn(3) * m() - rfn(2)) / (m() * d3) &&
        i21.lam2u2 == -(rfn(2) * m() * m() * m() - rfn(7) * m() * m() + m() + rfn(2)) /
                          (m() * (m() + rfn(1)) * d3) &&
        h0t.coeff(0, 1) == rfn(-2) * (rfn(11) * m() * m() - rfn(3) * m() - rfn(6)) / hden &&
        h0t.coeff(2, 0) ==
            rfn(2) * (rfn(16) * m() * m() * m() + m() * m() - rfn(9) * m() - rfn(2)) / hden;
    report(3, "exact tabulated intermediates", ok, t.elapsed());
}

// 4. Integrals through both exact oracles plus Monte Carlo.
void criterion_4() {
    Timer t;
    Params par = Params::cp_odd();
    RatFn q1 = rfn(2) * m() + rfn(1), q3 = rfn(2) * m() + rfn(3);
    bool ok = moment_u_pow(2, par) == rfn(1) / q1 && moment_u_pow(4, par) == rfn(3) / (q1 * q3);
    for (int mm = 2; mm <= 4 && ok; ++mm) {
        std::vector<Rat> eps(2 * mm, rat(-1));
        for (int a = 0; a < mm; ++a) eps[a] = rat(1);
        for (int k = 0; k <= 8 && ok; ++k) ok = simplex_avg_pow(eps, k) == moment_u_pow(k, par).eval(mm);
    }
    Chart chart = Chart::cp_odd(2);
    McEstimate e2 = mc_integrate(
        chart, [](const ChartPoint& q) { double u = (q.A - q.B) / q.S; return u * u; }, 100000, 7);
    McEstimate e4 = mc_integrate(
        chart, [](const ChartPoint& q) { double u = (q.A - q.B) / q.S; return u * u * u * u; }, 100000,
        7);
    ok = ok && std::abs(e2.mean - 0.2) <= 3 * e2.se && std::abs(e4.mean - 3.0 / 35.0) <= 3 * e4.se;
    double sec = t.elapsed();
    report(4, "integrals, double oracle + MC", ok && sec < 10.0, sec);
}

// 5. Pointwise geometry against FD/contraction oracles at 100+ points.
void criterion_5() {
    Timer t;
    bool ok = true;
    std::ostringstream why;
    for (int mm : {2, 3}) {
        Chart chart = Chart::cp_odd(mm);
        DiagEigen u = DiagEigen::balanced(mm);
        Rng rng(500 + mm);
        RealMetricFn metric = [chart](const std::vector<double>& x) {
            std::vector<cd> z(chart.N);
            for (int i = 0; i < chart.N; ++i) z[i] = cd(x[2 * i], x[2 * i + 1]);
            return real_metric_from(metric_at(chart, chart.point(std::move(z))).g);
        };
        double fd_rel = 0, eval_err = 0;
        for (int trial = 0; trial < 100; ++trial) {
            ChartPoint p = random_point(chart, rng, 0.8);
            std::vector<double> x(2 * chart.N);
            for (int i = 0; i < chart.N; ++i) {
                x[2 * i] = p.z[i].real();
                x[2 * i + 1] = p.z[i].imag();
            }
            // christoffel closed vs FD (relative)
            auto fd = christoffel_real_fd(metric, x, 1e-4);
            auto closed = christoffel_real_closed(chart, p);
            double scale = 1.0, diff = 0;
            for (int a = 0; a < 2 * chart.N; ++a) {
                scale = std::max(scale, real_mat_max_abs(closed[a]));
                diff = std::max(diff, real_mat_max_abs_diff(fd[a], closed[a]));
            }
            fd_rel = std::max(fd_rel, diff / scale);

            // gradient closed vs FD
            std::vector<cd> dug = u.grad(p);
            std::vector<cd> du_fd =
                fd_grad_scalar(chart, [&u](const ChartPoint& q) { return u.value(q); }, p, 1e-4);
            for (int i = 0; i < chart.N; ++i) fd_rel = std::max(fd_rel, std::abs(dug[i] - du_fd[i]));

            // hessian closed vs pure-FD covariant hessian (every 10th point)
            if (trial % 10 == 0) {
                CTensorField du_field = [&chart, &u](const ChartPoint& q) {
                    CTensorField scalar = [&chart, &u](const ChartPoint& r) {
                        return CTensor::from_scalar(chart.N, u.value(r));
                    };
                    return cov_deriv(chart, scalar, q, 1e-4);
                };
                CTensor fd_hess = cov_deriv(chart, du_field, p, 1e-4);
                CMat closed_h = u.hess(p);
                for (int i = 0; i < chart.N; ++i)
                    for (int j = 0; j < chart.N; ++j) {
                        fd_rel = std::max(fd_rel,
                                          std::abs(fd_hess.at({i, j + chart.N}) - closed_h[i][j]));
                        fd_rel = std::max(fd_rel, std::abs(fd_hess.at({i, j})));
                    }
            }

            // pure-evaluation identities
            MetricData md = metric_at(chart, p);
            CMat hs = u.hess(p);
            cd tr(0, 0), g2(0, 0);
            for (int i = 0; i < chart.N; ++i)
                for (int j = 0; j < chart.N; ++j) {
                    tr += md.ginv[i][j] * hs[i][j];
                    g2 += md.ginv[i][j] * dug[i] * std::conj(dug[j]);
                }
            double uu = u.value(p);
            eval_err = std::max(eval_err, std::abs(2.0 * tr.real() + uu));
            eval_err = std::max(eval_err, std::abs(2.0 * g2.real() - (1 - uu * uu) / (2.0 * mm)));
            XiValue xi = xi_at(chart, p, u, 1.0);
            for (int i = 0; i < chart.N; ++i)
                for (int j = 0; j < chart.N; ++j)
                    eval_err =
                        std::max(eval_err, std::abs(xi.contraction[i][j] - xi.combination[i][j]));
        }
        if (fd_rel > 1e-6 || eval_err > 1e-10) {
            ok = false;
            why << "m=" << mm << ": fd " << fd_rel << ", eval " << eval_err << " ";
        }
    }
    double sec = t.elapsed();
    report(5, "pointwise geometry oracles", ok && sec < 30.0, sec, why.str());
}

// 6. Operator matrix validation.
void criterion_6() {
    Timer t;
    bool ok = l_matrix() * l_inverse() == RatMatrix::identity(5);

    Chart chart = Chart::cp_odd(2);
    Rng rng(600);
    RatMatrix a = l_matrix();
    double col_err = 0, type_err = 0;
    for (int trial = 0; trial < 10; ++trial) {
        ChartPoint p = random_point(chart, rng, 0.6);
        MetricData md = metric_at(chart, p);
        for (int k = 0; k < kBasisDim; ++k) {
            CTensorField field = [&chart, k](const ChartPoint& q) {
                return CTensor::from_tensor_value(realize_basis_element(chart, q, k));
            };
            TensorValue img = rough_laplacian(chart, field, p, 1e-4).to_tensor_value() +
                              rm_action(md, realize_basis_element(chart, p, k)) * 2.0;
            std::vector<double> pred(kBasisDim);
            for (int i = 0; i < kBasisDim; ++i) pred[i] = rat_double(a.at(i, k).eval(2));
            col_err = std::max(col_err, tensor_max_abs_diff(img, realize_basis(chart, p, pred)));
            if (k == 2)
                for (int i = 0; i < chart.N; ++i)
                    for (int j = 0; j < chart.N; ++j)
                        type_err = std::max(type_err, std::abs(img.holo[i][j]));
            if (k == 4)
                for (int i = 0; i < chart.N; ++i)
                    for (int j = 0; j < chart.N; ++j)
                        type_err = std::max(type_err, std::abs(img.herm[i][j]));
        }
    }
    ok = ok && col_err <= 1e-4 && type_err <= 1e-6;
    std::ostringstream d;
    d << "columns " << col_err << ", type " << type_err;
    report(6, "operator matrix FD validation", ok, t.elapsed(), d.str());
}

// 7. Conformal Ricci variations against FD.
void criterion_7() {
    Timer t;
    Chart chart = Chart::cp_odd(2);
    Rng rng(700);
    FDConfig cfg;
    cfg.step = 1e-3;
    cfg.richardson = true;
    double e1 = 0, e2 = 0;
    for (int trial = 0; trial < 10; ++trial) {
        ChartPoint p = random_point(chart, rng, 0.5);
        e1 = std::max(e1, fd_validate_variation(1, chart, p, cfg).error);
        e2 = std::max(e2, fd_validate_variation(2, chart, p, cfg).error);
    }
    std::ostringstream d;
    d << "order1 " << e1 << ", order2 " << e2;
    report(7, "conformal variation FD", e1 <= 1e-5 && e2 <= 1e-4, t.elapsed(), d.str());
}

// 8. Second-order landscape.
void criterion_8() {
    Timer t;
    bool ok = true;
    for (int n_complex = 1; n_complex <= 8; ++n_complex) {
        SecondOrderOutcome o = second_order_criterion(n_complex);
        bool even_slots = (n_complex % 2) == 1;
        ok = ok && o.unobstructed_exactly_balanced && (o.any_unobstructed == even_slots);
    }
    double sec = t.elapsed();
    report(8, "second-order landscape", ok && sec < 5.0, sec);
}

// 9. Product module.
void criterion_9() {
    Timer t;
    bool ok = root_identity_check_symbolic().identities_hold &&
              root_identity_check_symbolic().conclusion_trivial;
    Rng rng(900);
    for (int trial = 0; trial < 20 && ok; ++trial) {
        ProductConfig cfg;
        cfg.m = 1 + static_cast<long>(rng.next_u64() % 6);
        cfg.n2 = 1 + static_cast<long>(rng.next_u64() % 12);
        RootIdentityResult r = root_identity_check(cfg);
        ok = r.identities_hold && r.conclusion_trivial;
    }
    for (long n2 : {1L, 3L, 7L}) {
        ObstructionCoefficients oc = obstruction_coefficients(n2);
        RatFn n1 = rfn(4) * m(), n = n1 + rfn(n2), two_q = rfn(2) * (rfn(2) * m() - rfn(1));
        ok = ok && oc.with_g.u2w == n - rfn(2) && oc.with_g.v2w == two_q &&
             oc.with_g.uvw == n + rfn(4) * m() - rfn(4) &&
             oc.with_g1.u2w == (rfn(4) * m() + n - rfn(4)) * rfn(1, 2) && oc.with_g1.v2w == two_q &&
             oc.with_g1.uvw == rfn(4) * (rfn(2) * m() - rfn(1));
    }
    double sec = t.elapsed();
    report(9, "product obstruction algebra", ok && sec < 1.0, sec);
}

// 10. Determinism of the command-line driver.
void criterion_10(const char* cli_path) {
    Timer t;
    if (!cli_path) {
        report(10, "report determinism", false, t.elapsed(), "no driver path supplied");
        return;
    }
    auto run = [&](const std::string& out) {
        std::string cmd = std::string(cli_path) +
                          " verify --suite all --m 2 --samples 20000 --seed 7 --format json --out " +
                          out + " 2>/dev/null";
        return std::system(cmd.c_str());
    };
    int rc1 = run("/tmp/cpnv_report_a.json");
    int rc2 = run("/tmp/cpnv_report_b.json");
    auto slurp = [](const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        std::ostringstream os;
        os << f.rdbuf();
        return os.str();
    };
    std::string a = slurp("/tmp/cpnv_report_a.json"), b = slurp("/tmp/cpnv_report_b.json");
    bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
    std::ostringstream d;
    d << a.size() << " bytes, exit " << rc1 << "/" << rc2;
    report(10, "report determinism", ok, t.elapsed(), d.str());
}

}  // namespace

int main(int argc, char** argv) {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(argc > 1 ? argv[1] : nullptr);
    if (failures) printf("%d criterion(s) failed\n", failures);
    return failures;
}
