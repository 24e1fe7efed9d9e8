// Pointwise geometry of CP^N in the affine chart z0 = 1.
//
// All numeric tensor work happens in the complexified coordinate frame
// {d/dz_1..d/dz_N, d/dzbar_1..d/dzbar_N}.  A real symmetric 2-tensor is
// stored as its mixed block T_{i jbar} (a Hermitian matrix) and its
// holomorphic block T_{ij} (complex symmetric); the remaining components are
// conjugates.  The metric is normalized to Einstein constant 1/2, i.e.
//   g_{i jbar} = 2(N+1) (delta_ij / S - zbar_i z_j / S^2),   S = 1 + |z|^2.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace cpnv {

using cd = std::complex<double>;
using CMat = std::vector<std::vector<cd>>;

CMat cmat_zero(int n);

struct ChartPoint {
    std::vector<cd> z;  // chart coordinates z_1..z_N
    double A = 1, B = 0, S = 1;
};

struct Chart {
    int N = 1;      // complex dimension
    int split = 1;  // chart coords 1..split carry slot sign +1 (with slot 0), the rest -1
    double scale = 4;

    // CP^{2m-1} with the balanced block structure of the distinguished u.
    static Chart cp_odd(int m);
    // CP^N without a preferred split (A = S, B = 0).
    static Chart cp(int n_complex);

    ChartPoint point(std::vector<cd> z) const;
    int real_dim() const { return 2 * N; }
};

struct MetricData {
    CMat g;     // g[i][j]    = g_{i jbar}
    CMat ginv;  // ginv[i][j] = g^{i jbar}
    double scale = 4;
};

MetricData metric_at(const Chart& chart, const ChartPoint& p);

// Christoffel coefficient Gamma^k_{ij} of the holomorphic block; all mixed
// blocks vanish and the antiholomorphic block is the conjugate.
cd christoffel(const ChartPoint& p, int k, int i, int j);

// Curvature component R_{i jbar k lbar} in the closed form
// (g_{i jbar} g_{k lbar} + g_{i lbar} g_{k jbar}) / scale.
cd curvature_1111(const MetricData& md, int i, int j, int k, int l);

struct TensorValue {
    CMat herm;  // herm[i][j] = T_{i jbar}
    CMat holo;  // holo[i][j] = T_{ij}

    static TensorValue zero(int n);
    TensorValue operator+(const TensorValue& o) const;
    TensorValue operator-(const TensorValue& o) const;
    TensorValue operator*(double s) const;
    int dim() const { return static_cast<int>(herm.size()); }
};

double tensor_trace(const MetricData& md, const TensorValue& t);
double tensor_inner(const MetricData& md, const TensorValue& a, const TensorValue& b);

// Curvature action Rm(T)_{ac} = -R_{abcd} T^{bd} in closed form, per type:
// (1,1) block maps to (T + (tr/2) g)/scale, the (2,0)+(0,2) block to -2T/scale.
TensorValue rm_action(const MetricData& md, const TensorValue& t);

// Frobenius-style max-abs difference of all blocks.
double tensor_max_abs_diff(const TensorValue& a, const TensorValue& b);
double tensor_max_abs(const TensorValue& a);

// Real-coordinate translation (x_1, y_1, ..., x_N, y_N ordering).
std::vector<std::vector<double>> real_metric_from(const CMat& g_herm);
std::vector<std::vector<double>> real_tensor_from(const TensorValue& t);

// --- deterministic sampling -------------------------------------------------

struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next();
};

// xoshiro256** with deterministic seeding; gaussians by Box-Muller so the
// stream is reproducible independent of the standard library.
struct Rng {
    explicit Rng(uint64_t seed);
    uint64_t next_u64();
    double uniform01();  // in (0, 1]
    double gaussian();

  private:
    uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0;
};

// Fubini-Study-uniform point: direction of a standard complex Gaussian in
// C^{N+1}; resamples while |w_0| < 1e-3 |w|.
ChartPoint sample_point(const Chart& chart, Rng& rng);

struct McEstimate {
    double mean = 0;
    double se = 0;
    long samples = 0;
    uint64_t seed = 0;
};

// Normalized average of f over the manifold with batch-mean standard error.
// Deterministic for fixed (samples, seed, workers): each worker owns a derived
// seed and results are merged in worker order.
McEstimate mc_integrate(const Chart& chart, const std::function<double(const ChartPoint&)>& f,
                        long samples, uint64_t seed, int workers = 4);

// Point image under a block-diagonal unitary on homogeneous coordinates
// (preserving slot 0's block); used for frame-invariance checks.
ChartPoint apply_block_unitary(const Chart& chart, const ChartPoint& p,
                               const std::vector<std::vector<cd>>& u_plus,
                               const std::vector<std::vector<cd>>& u_minus);

}  // namespace cpnv
