#include "cpnv/chart.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace cpnv {

CMat cmat_zero(int n) { return CMat(n, std::vector<cd>(n, cd(0, 0))); }

Chart Chart::cp_odd(int m) {
    if (m < 1) throw std::invalid_argument("Chart::cp_odd: m must be >= 1");
    Chart c;
    c.N = 2 * m - 1;
    c.split = m - 1;
    c.scale = 2.0 * (c.N + 1);
    return c;
}

Chart Chart::cp(int n_complex) {
    if (n_complex < 1) throw std::invalid_argument("Chart::cp: dimension must be >= 1");
    Chart c;
    c.N = n_complex;
    c.split = n_complex;
    c.scale = 2.0 * (c.N + 1);
    return c;
}

ChartPoint Chart::point(std::vector<cd> z) const {
    if (static_cast<int>(z.size()) != N) throw std::invalid_argument("Chart::point: wrong coordinate count");
    ChartPoint p;
    p.z = std::move(z);
    p.A = 1.0;
    p.B = 0.0;
    for (int i = 0; i < N; ++i) {
        double a = std::norm(p.z[i]);
        if (i < split)
            p.A += a;
        else
            p.B += a;
    }
    p.S = p.A + p.B;
    return p;
}

MetricData metric_at(const Chart& chart, const ChartPoint& p) {
    int n = chart.N;
    MetricData md;
    md.scale = chart.scale;
    md.g = cmat_zero(n);
    md.ginv = cmat_zero(n);
    double S = p.S;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cd d = (i == j) ? cd(1, 0) : cd(0, 0);
            md.g[i][j] = chart.scale * (d / S - std::conj(p.z[i]) * p.z[j] / (S * S));
            md.ginv[i][j] = (S / chart.scale) * (d + p.z[i] * std::conj(p.z[j]));
        }
    return md;
}

cd christoffel(const ChartPoint& p, int k, int i, int j) {
    cd v(0, 0);
    if (k == i) v += std::conj(p.z[j]);
    if (k == j) v += std::conj(p.z[i]);
    return -v / p.S;
}

cd curvature_1111(const MetricData& md, int i, int j, int k, int l) {
    return (md.g[i][j] * md.g[k][l] + md.g[i][l] * md.g[k][j]) / md.scale;
}

TensorValue TensorValue::zero(int n) {
    TensorValue t;
    t.herm = cmat_zero(n);
    t.holo = cmat_zero(n);
    return t;
}

TensorValue TensorValue::operator+(const TensorValue& o) const {
    TensorValue r = *this;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) {
            r.herm[i][j] += o.herm[i][j];
            r.holo[i][j] += o.holo[i][j];
        }
    return r;
}

TensorValue TensorValue::operator-(const TensorValue& o) const { return *this + o * (-1.0); }

TensorValue TensorValue::operator*(double s) const {
    TensorValue r = *this;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) {
            r.herm[i][j] *= s;
            r.holo[i][j] *= s;
        }
    return r;
}

double tensor_trace(const MetricData& md, const TensorValue& t) {
    cd acc(0, 0);
    int n = t.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += md.ginv[i][j] * t.herm[i][j];
    return 2.0 * acc.real();
}

double tensor_inner(const MetricData& md, const TensorValue& a, const TensorValue& b) {
    int n = a.dim();
    // (1,1) x (1,1):  2 Re sum a_{i jbar} (G^-1 b^T G^-1)_{i j}
    cd acc(0, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cd m1(0, 0);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) m1 += md.ginv[i][k] * b.herm[l][k] * md.ginv[l][j];
            acc += a.herm[i][j] * m1;
        }
    // (2,0)+(0,2):  2 Re sum a_{ij} conj(b_{kl}) g^{i kbar} g^{j lbar}
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cd m2(0, 0);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) m2 += md.ginv[i][k] * std::conj(b.holo[k][l]) * md.ginv[j][l];
            acc += a.holo[i][j] * m2;
        }
    return 2.0 * acc.real();
}

TensorValue rm_action(const MetricData& md, const TensorValue& t) {
    int n = t.dim();
    double tr = tensor_trace(md, t);
    TensorValue r = TensorValue::zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            r.herm[i][j] = (t.herm[i][j] + 0.5 * tr * md.g[i][j]) / md.scale;
            r.holo[i][j] = -2.0 * t.holo[i][j] / md.scale;
        }
    return r;
}

double tensor_max_abs_diff(const TensorValue& a, const TensorValue& b) {
    double m = 0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) {
            m = std::max(m, std::abs(a.herm[i][j] - b.herm[i][j]));
            m = std::max(m, std::abs(a.holo[i][j] - b.holo[i][j]));
        }
    return m;
}

double tensor_max_abs(const TensorValue& a) {
    double m = 0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) {
            m = std::max(m, std::abs(a.herm[i][j]));
            m = std::max(m, std::abs(a.holo[i][j]));
        }
    return m;
}

std::vector<std::vector<double>> real_metric_from(const CMat& g_herm) {
    int n = static_cast<int>(g_herm.size());
    std::vector<std::vector<double>> g(2 * n, std::vector<double>(2 * n, 0.0));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            double re = 2.0 * g_herm[p][q].real(), im = 2.0 * g_herm[p][q].imag();
            g[2 * p][2 * q] = re;
            g[2 * p][2 * q + 1] = im;
            g[2 * p + 1][2 * q] = -im;
            g[2 * p + 1][2 * q + 1] = re;
        }
    return g;
}

std::vector<std::vector<double>> real_tensor_from(const TensorValue& t) {
    int n = t.dim();
    std::vector<std::vector<double>> r(2 * n, std::vector<double>(2 * n, 0.0));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            cd h = t.herm[p][q], o = t.holo[p][q];
            r[2 * p][2 * q] = 2.0 * (h + o).real();
            r[2 * p][2 * q + 1] = 2.0 * (h - o).imag();
            r[2 * p + 1][2 * q] = -2.0 * (h + o).imag();
            r[2 * p + 1][2 * q + 1] = 2.0 * (h - o).real();
        }
    return r;
}

uint64_t SplitMix64::next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {
inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& s : s_) s = sm.next();
}

uint64_t Rng::next_u64() {
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() {
    // 53-bit mantissa in (0, 1].
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

ChartPoint sample_point(const Chart& chart, Rng& rng) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::vector<cd> w(chart.N + 1);
        double norm2 = 0;
        for (auto& wi : w) {
            wi = cd(rng.gaussian(), rng.gaussian());
            norm2 += std::norm(wi);
        }
        if (std::norm(w[0]) < 1e-6 * norm2) continue;  // |w0| < 1e-3 |w|
        std::vector<cd> z(chart.N);
        for (int i = 0; i < chart.N; ++i) z[i] = w[i + 1] / w[0];
        return chart.point(std::move(z));
    }
    throw std::logic_error("sample_point: retry cap exceeded");
}

McEstimate mc_integrate(const Chart& chart, const std::function<double(const ChartPoint&)>& f,
                        long samples, uint64_t seed, int workers) {
    if (samples < 100) throw std::invalid_argument("mc_integrate: need at least 100 samples");
    if (workers < 1) workers = 1;
    const int batches_per_worker = 16;
    std::vector<std::vector<double>> batch_means(workers);
    std::vector<std::thread> pool;
    long per_worker = samples / workers;
    for (int w = 0; w < workers; ++w) {
        long count = (w == workers - 1) ? samples - per_worker * (workers - 1) : per_worker;
        pool.emplace_back([&, w, count]() {
            Rng rng(SplitMix64(seed + 0x517cc1b727220a95ULL * (w + 1)).next());
            long per_batch = count / batches_per_worker;
            std::vector<double>& means = batch_means[w];
            for (int b = 0; b < batches_per_worker; ++b) {
                long nb = (b == batches_per_worker - 1) ? count - per_batch * (batches_per_worker - 1)
                                                        : per_batch;
                double acc = 0;
                for (long i = 0; i < nb; ++i) acc += f(sample_point(chart, rng));
                means.push_back(acc / static_cast<double>(nb));
            }
        });
    }
    for (auto& t : pool) t.join();

    double mean = 0;
    int nb = 0;
    for (const auto& ms : batch_means)
        for (double v : ms) {
            mean += v;
            ++nb;
        }
    mean /= nb;
    double var = 0;
    for (const auto& ms : batch_means)
        for (double v : ms) var += (v - mean) * (v - mean);
    var /= (nb - 1);
    McEstimate e;
    e.mean = mean;
    e.se = std::sqrt(var / nb);
    e.samples = samples;
    e.seed = seed;
    return e;
}

ChartPoint apply_block_unitary(const Chart& chart, const ChartPoint& p,
                               const std::vector<std::vector<cd>>& u_plus,
                               const std::vector<std::vector<cd>>& u_minus) {
    // Homogeneous coordinates (1, z); the + block is slots 0..split, the -
    // block the rest.
    int np = chart.split + 1, nm = chart.N - chart.split;
    if (static_cast<int>(u_plus.size()) != np || static_cast<int>(u_minus.size()) != nm)
        throw std::invalid_argument("apply_block_unitary: block size mismatch");
    std::vector<cd> w(chart.N + 1, cd(0, 0));
    std::vector<cd> hom(chart.N + 1);
    hom[0] = cd(1, 0);
    for (int i = 0; i < chart.N; ++i) hom[i + 1] = p.z[i];
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) w[i] += u_plus[i][j] * hom[j];
    for (int i = 0; i < nm; ++i)
        for (int j = 0; j < nm; ++j) w[np + i] += u_minus[i][j] * hom[np + j];
    if (std::abs(w[0]) < 1e-12) throw std::domain_error("apply_block_unitary: image leaves the chart");
    std::vector<cd> z(chart.N);
    for (int i = 0; i < chart.N; ++i) z[i] = w[i + 1] / w[0];
    return chart.point(std::move(z));
}

}  // namespace cpnv
