#include "cpnv/linalg.hpp"

namespace cpnv {

RatMatrix::RatMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("RatMatrix: nonpositive dimension");
    e_.assign(static_cast<size_t>(rows) * cols, RatFn());
}

RatMatrix RatMatrix::identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = RatFn(1);
    return m;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("RatMatrix: shape mismatch in product");
    RatMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
        }
    return r;
}

std::vector<RatFn> RatMatrix::operator*(const std::vector<RatFn>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("RatMatrix: shape mismatch in mat-vec");
    std::vector<RatFn> r(rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
    return r;
}

std::vector<RatFn> solve_linear(const RatMatrix& m, const std::vector<RatFn>& b) {
    if (m.rows() != m.cols()) throw std::invalid_argument("solve_linear: matrix must be square");
    int n = m.rows();
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("solve_linear: rhs size mismatch");

    RatMatrix a = m;
    std::vector<RatFn> x = b;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (!a.at(r, col).is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0)
            throw SingularMatrixError(col, "solve_linear: singular matrix, pivot vanishes in column " +
                                               std::to_string(col));
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a.at(pivot, j), a.at(col, j));
            std::swap(x[pivot], x[col]);
        }
        RatFn inv = RatFn(1) / a.at(col, col);
        for (int j = col; j < n; ++j) a.at(col, j) *= inv;
        x[col] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == col || a.at(r, col).is_zero()) continue;
            RatFn f = a.at(r, col);
            for (int j = col; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
            x[r] -= f * x[col];
        }
    }
    return x;
}

RatMatrix invert(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("invert: matrix must be square");
    int n = m.rows();
    RatMatrix result(n, n);
    for (int col = 0; col < n; ++col) {
        std::vector<RatFn> e(n);
        e[col] = RatFn(1);
        std::vector<RatFn> x = solve_linear(m, e);
        for (int i = 0; i < n; ++i) result.at(i, col) = x[i];
    }
    return result;
}

}  // namespace cpnv
