#include "cpnv/eigenfunction.hpp"

#include <cmath>
#include <stdexcept>

namespace cpnv {

DiagEigen DiagEigen::balanced(int m, double lambda) {
    DiagEigen e;
    e.h.assign(2 * m, -lambda);
    for (int a = 0; a < m; ++a) e.h[a] = lambda;
    return e;
}

double DiagEigen::value(const ChartPoint& p) const {
    double num = h[0];
    for (size_t i = 0; i < p.z.size(); ++i) num += h[i + 1] * std::norm(p.z[i]);
    return num / p.S;
}

std::vector<cd> DiagEigen::grad(const ChartPoint& p) const {
    double w = value(p);
    std::vector<cd> g(p.z.size());
    for (size_t i = 0; i < p.z.size(); ++i) g[i] = (h[i + 1] - w) * std::conj(p.z[i]) / p.S;
    return g;
}

CMat DiagEigen::hess(const ChartPoint& p) const {
    int n = static_cast<int>(p.z.size());
    double S = p.S;
    double num = h[0];
    for (int i = 0; i < n; ++i) num += h[i + 1] * std::norm(p.z[i]);
    CMat hs = cmat_zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cd v = (i == j) ? cd((h[i + 1] * S - num) / (S * S), 0) : cd(0, 0);
            v += std::conj(p.z[i]) * p.z[j] *
                 (-(h[i + 1] + h[j + 1]) / (S * S) + 2.0 * num / (S * S * S));
            hs[i][j] = v;
        }
    return hs;
}

TensorValue DiagEigen::hess_tensor(const ChartPoint& p) const {
    TensorValue t = TensorValue::zero(static_cast<int>(p.z.size()));
    t.herm = hess(p);
    return t;
}

double HermEigen::value(const ChartPoint& p) const {
    int d = static_cast<int>(H.size());
    std::vector<cd> hom(d);
    hom[0] = cd(1, 0);
    for (int i = 1; i < d; ++i) hom[i] = p.z[i - 1];
    cd acc(0, 0);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) acc += std::conj(hom[a]) * H[a][b] * hom[b];
    return acc.real() / p.S;
}

XiValue xi_at(const Chart& chart, const ChartPoint& p, const DiagEigen& u, double lambda2) {
    MetricData md = metric_at(chart, p);
    CMat hs = u.hess(p);
    std::vector<cd> du = u.grad(p);
    int n = chart.N;

    XiValue xi;
    xi.contraction = cmat_zero(n);
    // xi_{i jbar} = sum_{k,l} u_{i kbar} g^{l kbar} u_{l jbar}
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cd acc(0, 0);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) acc += hs[i][k] * md.ginv[l][k] * hs[l][j];
            xi.contraction[i][j] = acc;
        }

    double uval = u.value(p);
    double mm = chart.scale / 4.0;  // the parameter m of CP^{2m-1}, where scale = 4m
    xi.combination = cmat_zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            xi.combination[i][j] = (lambda2 - uval * uval) / (16.0 * mm * mm) * md.g[i][j] -
                                   du[i] * std::conj(du[j]) / (4.0 * mm) -
                                   uval * hs[i][j] / (2.0 * mm);
    return xi;
}

Rat sphere_moment(const std::vector<long>& exponents) {
    long d = static_cast<long>(exponents.size());
    if (d < 1) throw std::invalid_argument("sphere_moment: empty exponent vector");
    long total = 0;
    for (long e : exponents) {
        if (e < 0) throw std::invalid_argument("sphere_moment: negative exponent");
        total += e;
    }
    mpz_class num, den;
    mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(d - 1));
    for (long e : exponents) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(e));
        num *= f;
    }
    mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(d - 1 + total));
    Rat q(num, den);
    q.canonicalize();
    return q;
}

namespace {

void enumerate_exponents(long slots, long total, std::vector<long>& cur,
                         const std::function<void(const std::vector<long>&)>& emit) {
    if (slots == 1) {
        cur.push_back(total);
        emit(cur);
        cur.pop_back();
        return;
    }
    for (long e = 0; e <= total; ++e) {
        cur.push_back(e);
        enumerate_exponents(slots - 1, total - e, cur, emit);
        cur.pop_back();
    }
}

Rat multinomial(int k, const std::vector<long>& e) {
    mpz_class num, den(1);
    mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(k));
    for (long a : e) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(a));
        den *= f;
    }
    Rat q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace

Rat simplex_avg_pow(const std::vector<Rat>& a, int k) {
    if (k < 0) throw std::invalid_argument("simplex_avg_pow: negative power");
    Rat acc = rat(0);
    std::vector<long> cur;
    enumerate_exponents(static_cast<long>(a.size()), k, cur, [&](const std::vector<long>& e) {
        Rat term = multinomial(k, e);
        for (size_t i = 0; i < a.size(); ++i)
            for (long t = 0; t < e[i]; ++t) term *= a[i];
        if (term != 0) acc += term * sphere_moment(e);
    });
    return acc;
}

Rat criterion_integral(const std::vector<Rat>& u_coeffs, const std::vector<Rat>& w_coeffs) {
    size_t d = u_coeffs.size();
    if (w_coeffs.size() != d) throw std::invalid_argument("criterion_integral: slot count mismatch");
    Rat acc = rat(0);
    std::vector<long> e(d, 0);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            for (size_t k = 0; k < d; ++k) {
                Rat c = u_coeffs[i] * u_coeffs[j] * w_coeffs[k];
                if (c == 0) continue;
                e[i] += 1;
                e[j] += 1;
                e[k] += 1;
                acc += c * sphere_moment(e);
                e[i] -= 1;
                e[j] -= 1;
                e[k] -= 1;
            }
    return acc;
}

EuclidCheck euclid_laplacian_check(const std::vector<Rat>& lam) {
    // f = sum lam_a |z_a|^2 on C^d (real dimension 2d).  Termwise,
    //   Delta(|z_a|^2 |z_b|^2) = 4|z_a|^2 + 4|z_b|^2 + 8 delta_ab |z_a|^2,
    // so Delta f^2 = 8 (sum lam) f + 8 sum lam_a^2 |z_a|^2, and
    //   Delta r^4 = (8d + 8) r^2.
    size_t d = lam.size();
    EuclidCheck out;
    out.lap_f2_diag.assign(d, rat(0));
    Rat trace = rat(0);
    for (const Rat& l : lam) trace += l;
    for (size_t a = 0; a < d; ++a) out.lap_f2_diag[a] = rat(8) * (lam[a] * lam[a] + trace * lam[a]);
    out.lap_r4_coeff = rat(8) * Rat(static_cast<long>(d) + 1);

    bool prop = true;
    for (size_t a = 1; a < d; ++a) prop = prop && (out.lap_f2_diag[a] == out.lap_f2_diag[0]);
    out.proportional_to_r2 = prop;
    bool equal = true;
    Rat l0sq = lam.empty() ? rat(0) : Rat(lam[0] * lam[0]);
    for (const Rat& l : lam) equal = equal && (Rat(l * l) == l0sq);
    out.equal_moduli = equal;
    return out;
}

}  // namespace cpnv
