// Finite-difference differential operators.
//
// Two engines live here.  The complexified engine differentiates tensor
// fields given in the chart's complexified frame, using the closed-form
// Christoffel coefficients; it provides the rough Laplacian and divergence
// used to validate the deformation operator.  The real-coordinate engine
// recomputes Christoffel/Riemann/Ricci of an arbitrary metric field purely
// from central differences and is the independent oracle for the closed
// forms and for curvature of conformally deformed metrics.

#pragma once

#include "cpnv/chart.hpp"

namespace cpnv {

struct FDConfig {
    double step = 1e-4;
    bool richardson = false;
    int max_retries = 3;

    void validate() const;
};

// Dense complexified tensor of the given rank: index values 0..N-1 are
// holomorphic, N..2N-1 antiholomorphic.
class CTensor {
  public:
    CTensor(int n_complex, int rank);
    int dim() const { return n_; }
    int rank() const { return rank_; }
    cd& at(const std::vector<int>& idx);
    const cd& at(const std::vector<int>& idx) const;

    static CTensor from_tensor_value(const TensorValue& t);
    TensorValue to_tensor_value() const;
    static CTensor from_scalar(int n_complex, double v);
    static CTensor from_one_form(const std::vector<cd>& holo);  // real 1-form from w_i

  private:
    size_t offset(const std::vector<int>& idx) const;
    int n_, rank_;
    std::vector<cd> v_;
};

using CTensorField = std::function<CTensor(const ChartPoint&)>;

// Covariant derivative: result rank is field rank + 1, derivative index first.
CTensor cov_deriv(const Chart& chart, const CTensorField& field, const ChartPoint& p, double step);

// Rough Laplacian g^{ab} nabla_a nabla_b applied to a tensor field.
CTensor rough_laplacian(const Chart& chart, const CTensorField& field, const ChartPoint& p,
                        double step);

// Divergence (delta T)_B = g^{AC} nabla_A T_{CB} of a symmetric 2-tensor
// field; returns the holomorphic components of the resulting real 1-form.
std::vector<cd> divergence(const Chart& chart, const CTensorField& field, const ChartPoint& p,
                           double step);

// Scalar Laplacian by finite differences.
double fd_laplacian_scalar(const Chart& chart, const std::function<double(const ChartPoint&)>& f,
                           const ChartPoint& p, double step);

// Richardson-extrapolated scalar Laplacian: (4 L(h/2) - L(h)) / 3.
double fd_laplacian_scalar_r(const Chart& chart, const std::function<double(const ChartPoint&)>& f,
                             const ChartPoint& p, double step);

// Gradient (holomorphic components d_i f) by finite differences.
std::vector<cd> fd_grad_scalar(const Chart& chart, const std::function<double(const ChartPoint&)>& f,
                               const ChartPoint& p, double step);

// --- real-coordinate engine --------------------------------------------------

using RealMat = std::vector<std::vector<double>>;
using RealMetricFn = std::function<RealMat(const std::vector<double>&)>;

RealMat real_mat_inverse(const RealMat& a);

// Gamma^c_{ab} from central differences of the metric.
std::vector<RealMat> christoffel_real_fd(const RealMetricFn& metric, const std::vector<double>& x,
                                         double step);

// Covariant curvature R_{abcd} = <[nabla_a, nabla_b] d_c, d_d>, via central
// differences of the Christoffel field.
std::vector<std::vector<RealMat>> riemann_real_fd(const RealMetricFn& metric,
                                                  const std::vector<double>& x, double step);

// Ricci in the convention Rc_{ac} = -R_{abcd} g^{bd}.
RealMat ricci_real_fd(const RealMetricFn& metric, const std::vector<double>& x, double step);

// Closed-form real-coordinate Christoffels of the Fubini-Study chart metric,
// translated from the holomorphic block.
std::vector<RealMat> christoffel_real_closed(const Chart& chart, const ChartPoint& p);

double real_mat_max_abs_diff(const RealMat& a, const RealMat& b);
double real_mat_max_abs(const RealMat& a);

}  // namespace cpnv
