#include "cpnv/fd.hpp"

#include <cmath>
#include <stdexcept>

namespace cpnv {

void FDConfig::validate() const {
    if (step < 1e-8 || step > 1e-1) throw std::invalid_argument("FDConfig: step outside [1e-8, 1e-1]");
    if (max_retries < 0) throw std::invalid_argument("FDConfig: negative retry count");
}

CTensor::CTensor(int n_complex, int rank) : n_(n_complex), rank_(rank) {
    size_t size = 1;
    for (int i = 0; i < rank; ++i) size *= static_cast<size_t>(2 * n_);
    v_.assign(std::max<size_t>(size, 1), cd(0, 0));
}

size_t CTensor::offset(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != rank_) throw std::invalid_argument("CTensor: rank mismatch");
    size_t o = 0;
    for (int i : idx) o = o * (2 * n_) + static_cast<size_t>(i);
    return o;
}

cd& CTensor::at(const std::vector<int>& idx) { return v_[offset(idx)]; }
const cd& CTensor::at(const std::vector<int>& idx) const { return v_[offset(idx)]; }

CTensor CTensor::from_tensor_value(const TensorValue& t) {
    int n = t.dim();
    CTensor c(n, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            c.at({i, j + n}) = t.herm[i][j];
            c.at({i + n, j}) = t.herm[j][i];
            c.at({i, j}) = t.holo[i][j];
            c.at({i + n, j + n}) = std::conj(t.holo[i][j]);
        }
    return c;
}

TensorValue CTensor::to_tensor_value() const {
    if (rank_ != 2) throw std::invalid_argument("CTensor::to_tensor_value: rank must be 2");
    TensorValue t = TensorValue::zero(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            t.herm[i][j] = at({i, j + n_});
            t.holo[i][j] = at({i, j});
        }
    return t;
}

CTensor CTensor::from_scalar(int n_complex, double v) {
    CTensor c(n_complex, 0);
    c.at({}) = cd(v, 0);
    return c;
}

CTensor CTensor::from_one_form(const std::vector<cd>& holo) {
    int n = static_cast<int>(holo.size());
    CTensor c(n, 1);
    for (int i = 0; i < n; ++i) {
        c.at({i}) = holo[i];
        c.at({i + n}) = std::conj(holo[i]);
    }
    return c;
}

namespace {

ChartPoint shifted(const Chart& chart, const ChartPoint& p, int real_dir, double h) {
    std::vector<cd> z = p.z;
    int coord = real_dir / 2;
    if (real_dir % 2 == 0)
        z[coord] += h;
    else
        z[coord] += cd(0, h);
    return chart.point(std::move(z));
}

// All complexified partial derivatives of a field at p: result[C] is the
// rank-k tensor d_C F, C in 0..2N-1 (holo then anti).
std::vector<CTensor> complex_partials(const Chart& chart, const CTensorField& field,
                                      const ChartPoint& p, double step) {
    int n = chart.N;
    CTensor probe = field(p);
    std::vector<CTensor> real_d(2 * n, CTensor(n, probe.rank()));
    for (int r = 0; r < 2 * n; ++r) {
        CTensor plus = field(shifted(chart, p, r, step));
        CTensor minus = field(shifted(chart, p, r, -step));
        CTensor d(n, probe.rank());
        size_t total = 1;
        for (int k = 0; k < probe.rank(); ++k) total *= static_cast<size_t>(2 * n);
        // flat iteration
        std::vector<int> idx(probe.rank(), 0);
        for (size_t off = 0; off < std::max<size_t>(total, 1); ++off) {
            size_t rem = off;
            for (int k = probe.rank() - 1; k >= 0; --k) {
                idx[k] = static_cast<int>(rem % (2 * n));
                rem /= (2 * n);
            }
            d.at(idx) = (plus.at(idx) - minus.at(idx)) / (2.0 * step);
        }
        real_d[r] = d;
    }
    std::vector<CTensor> out(2 * n, CTensor(n, probe.rank()));
    for (int c = 0; c < n; ++c) {
        const CTensor& dx = real_d[2 * c];
        const CTensor& dy = real_d[2 * c + 1];
        CTensor hol(n, probe.rank()), anti(n, probe.rank());
        size_t total = 1;
        for (int k = 0; k < probe.rank(); ++k) total *= static_cast<size_t>(2 * n);
        std::vector<int> idx(probe.rank(), 0);
        for (size_t off = 0; off < std::max<size_t>(total, 1); ++off) {
            size_t rem = off;
            for (int k = probe.rank() - 1; k >= 0; --k) {
                idx[k] = static_cast<int>(rem % (2 * n));
                rem /= (2 * n);
            }
            cd vx = dx.at(idx), vy = dy.at(idx);
            hol.at(idx) = 0.5 * (vx - cd(0, 1) * vy);
            anti.at(idx) = 0.5 * (vx + cd(0, 1) * vy);
        }
        out[c] = hol;
        out[c + n] = anti;
    }
    return out;
}

}  // namespace

CTensor cov_deriv(const Chart& chart, const CTensorField& field, const ChartPoint& p, double step) {
    int n = chart.N;
    CTensor value = field(p);
    int rank = value.rank();
    std::vector<CTensor> partials = complex_partials(chart, field, p, step);
    CTensor out(n, rank + 1);

    size_t total = 1;
    for (int k = 0; k < rank; ++k) total *= static_cast<size_t>(2 * n);
    std::vector<int> idx(rank, 0);
    for (int C = 0; C < 2 * n; ++C) {
        bool c_holo = C < n;
        int c = c_holo ? C : C - n;
        for (size_t off = 0; off < std::max<size_t>(total, 1); ++off) {
            size_t rem = off;
            for (int k = rank - 1; k >= 0; --k) {
                idx[k] = static_cast<int>(rem % (2 * n));
                rem /= (2 * n);
            }
            cd acc = partials[C].at(idx);
            // Christoffel corrections: only all-holomorphic or all-anti blocks.
            for (int s = 0; s < rank; ++s) {
                int A = idx[s];
                bool a_holo = A < n;
                if (a_holo != c_holo) continue;
                int a = a_holo ? A : A - n;
                std::vector<int> jdx = idx;
                for (int e = 0; e < n; ++e) {
                    cd gamma = christoffel(p, e, c, a);
                    if (!c_holo) gamma = std::conj(gamma);
                    if (gamma == cd(0, 0)) continue;
                    jdx[s] = c_holo ? e : e + n;
                    acc -= gamma * value.at(jdx);
                }
            }
            std::vector<int> full(rank + 1);
            full[0] = C;
            for (int k = 0; k < rank; ++k) full[k + 1] = idx[k];
            out.at(full) = acc;
        }
    }
    return out;
}

CTensor rough_laplacian(const Chart& chart, const CTensorField& field, const ChartPoint& p,
                        double step) {
    int n = chart.N;
    CTensorField first = [&chart, &field, step](const ChartPoint& q) {
        return cov_deriv(chart, field, q, step);
    };
    CTensor second = cov_deriv(chart, first, p, step);
    MetricData md = metric_at(chart, p);

    CTensor probe = field(p);
    int rank = probe.rank();
    CTensor out(n, rank);
    size_t total = 1;
    for (int k = 0; k < rank; ++k) total *= static_cast<size_t>(2 * n);
    std::vector<int> idx(rank, 0);
    for (size_t off = 0; off < std::max<size_t>(total, 1); ++off) {
        size_t rem = off;
        for (int k = rank - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(rem % (2 * n));
            rem /= (2 * n);
        }
        cd acc(0, 0);
        std::vector<int> full(rank + 2);
        for (int k = 0; k < rank; ++k) full[k + 2] = idx[k];
        for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
                full[0] = c;
                full[1] = d + n;
                acc += md.ginv[c][d] * second.at(full);
                full[0] = c + n;
                full[1] = d;
                acc += md.ginv[d][c] * second.at(full);
            }
        out.at(idx) = acc;
    }
    return out;
}

std::vector<cd> divergence(const Chart& chart, const CTensorField& field, const ChartPoint& p,
                           double step) {
    int n = chart.N;
    CTensor w = cov_deriv(chart, field, p, step);  // w[A][C][B]
    MetricData md = metric_at(chart, p);
    std::vector<cd> out(n, cd(0, 0));
    for (int b = 0; b < n; ++b) {
        cd acc(0, 0);
        for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
                acc += md.ginv[c][d] * w.at({c, d + n, b});
                acc += md.ginv[d][c] * w.at({c + n, d, b});
            }
        out[b] = acc;
    }
    return out;
}

double fd_laplacian_scalar(const Chart& chart, const std::function<double(const ChartPoint&)>& f,
                           const ChartPoint& p, double step) {
    CTensorField field = [&chart, &f](const ChartPoint& q) {
        return CTensor::from_scalar(chart.N, f(q));
    };
    CTensor lap = rough_laplacian(chart, field, p, step);
    return lap.at({}).real();
}

double fd_laplacian_scalar_r(const Chart& chart, const std::function<double(const ChartPoint&)>& f,
                             const ChartPoint& p, double step) {
    double coarse = fd_laplacian_scalar(chart, f, p, step);
    double fine = fd_laplacian_scalar(chart, f, p, step / 2);
    return (4.0 * fine - coarse) / 3.0;
}

std::vector<cd> fd_grad_scalar(const Chart& chart, const std::function<double(const ChartPoint&)>& f,
                               const ChartPoint& p, double step) {
    CTensorField field = [&chart, &f](const ChartPoint& q) {
        return CTensor::from_scalar(chart.N, f(q));
    };
    CTensor d = cov_deriv(chart, field, p, step);
    std::vector<cd> out(chart.N);
    for (int i = 0; i < chart.N; ++i) out[i] = d.at({i});
    return out;
}

RealMat real_mat_inverse(const RealMat& a) {
    int n = static_cast<int>(a.size());
    RealMat m = a;
    RealMat inv(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-14) throw std::domain_error("real_mat_inverse: singular");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        double d = m[col][col];
        for (int j = 0; j < n; ++j) {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = m[r][col];
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

namespace {

std::vector<RealMat> christoffel_from_metric(const RealMetricFn& metric, const std::vector<double>& x,
                                             double step) {
    int n = static_cast<int>(x.size());
    RealMat g = metric(x);
    RealMat ginv = real_mat_inverse(g);
    // dg[k][a][b] = d_k g_ab
    std::vector<RealMat> dg(n, RealMat(n, std::vector<double>(n, 0.0)));
    for (int k = 0; k < n; ++k) {
        std::vector<double> xp = x, xm = x;
        xp[k] += step;
        xm[k] -= step;
        RealMat gp = metric(xp), gm = metric(xm);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) dg[k][a][b] = (gp[a][b] - gm[a][b]) / (2 * step);
    }
    std::vector<RealMat> gamma(n, RealMat(n, std::vector<double>(n, 0.0)));
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double acc = 0;
                for (int d = 0; d < n; ++d)
                    acc += ginv[c][d] * (dg[a][b][d] + dg[b][a][d] - dg[d][a][b]);
                gamma[c][a][b] = 0.5 * acc;
            }
    return gamma;
}

}  // namespace

std::vector<RealMat> christoffel_real_fd(const RealMetricFn& metric, const std::vector<double>& x,
                                         double step) {
    return christoffel_from_metric(metric, x, step);
}

std::vector<std::vector<RealMat>> riemann_real_fd(const RealMetricFn& metric,
                                                  const std::vector<double>& x, double step) {
    int n = static_cast<int>(x.size());
    RealMat g = metric(x);
    std::vector<RealMat> gamma = christoffel_from_metric(metric, x, step);
    // dGamma[k][c][a][b] = d_k Gamma^c_{ab}
    std::vector<std::vector<RealMat>> dgamma(n, std::vector<RealMat>(n, RealMat(n, std::vector<double>(n, 0.0))));
    for (int k = 0; k < n; ++k) {
        std::vector<double> xp = x, xm = x;
        xp[k] += step;
        xm[k] -= step;
        std::vector<RealMat> gp = christoffel_from_metric(metric, xp, step);
        std::vector<RealMat> gm = christoffel_from_metric(metric, xm, step);
        for (int c = 0; c < n; ++c)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    dgamma[k][c][a][b] = (gp[c][a][b] - gm[c][a][b]) / (2 * step);
    }
    // R(d_a, d_b) d_c = ( d_a Gamma^e_{bc} - d_b Gamma^e_{ac}
    //                     + Gamma^f_{bc} Gamma^e_{af} - Gamma^f_{ac} Gamma^e_{bf} ) d_e
    std::vector<std::vector<RealMat>> riem(n, std::vector<RealMat>(n, RealMat(n, std::vector<double>(n, 0.0))));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    double acc = 0;
                    for (int e = 0; e < n; ++e) {
                        double re = dgamma[a][e][b][c] - dgamma[b][e][a][c];
                        for (int f = 0; f < n; ++f)
                            re += gamma[f][b][c] * gamma[e][a][f] - gamma[f][a][c] * gamma[e][b][f];
                        acc += g[e][d] * re;
                    }
                    riem[a][b][c][d] = acc;
                }
            }
    return riem;
}

RealMat ricci_real_fd(const RealMetricFn& metric, const std::vector<double>& x, double step) {
    int n = static_cast<int>(x.size());
    RealMat g = metric(x);
    RealMat ginv = real_mat_inverse(g);
    auto riem = riemann_real_fd(metric, x, step);
    RealMat rc(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            double acc = 0;
            for (int b = 0; b < n; ++b)
                for (int d = 0; d < n; ++d) acc += ginv[b][d] * riem[a][b][c][d];
            rc[a][c] = -acc;
        }
    return rc;
}

std::vector<RealMat> christoffel_real_closed(const Chart& chart, const ChartPoint& p) {
    int n = chart.N;
    std::vector<RealMat> gamma(2 * n, RealMat(2 * n, std::vector<double>(2 * n, 0.0)));
    for (int pp = 0; pp < n; ++pp)
        for (int q = 0; q < n; ++q)
            for (int k = 0; k < n; ++k) {
                cd G = christoffel(p, k, pp, q);
                // nabla_{X_a} X_b for the four real direction pairs; the
                // resulting vector v^k d_k + conj gives real components
                // (Re v, Im v) on (x_k, y_k).
                cd v_xx = G, v_xy = cd(0, 1) * G, v_yy = -G;
                gamma[2 * k][2 * pp][2 * q] = v_xx.real();
                gamma[2 * k + 1][2 * pp][2 * q] = v_xx.imag();
                gamma[2 * k][2 * pp][2 * q + 1] = v_xy.real();
                gamma[2 * k + 1][2 * pp][2 * q + 1] = v_xy.imag();
                gamma[2 * k][2 * pp + 1][2 * q] = v_xy.real();
                gamma[2 * k + 1][2 * pp + 1][2 * q] = v_xy.imag();
                gamma[2 * k][2 * pp + 1][2 * q + 1] = v_yy.real();
                gamma[2 * k + 1][2 * pp + 1][2 * q + 1] = v_yy.imag();
            }
    return gamma;
}

double real_mat_max_abs_diff(const RealMat& a, const RealMat& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
    return m;
}

double real_mat_max_abs(const RealMat& a) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j]));
    return m;
}

}  // namespace cpnv
