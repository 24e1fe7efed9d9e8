// Small dense exact linear algebra over the rational-function field.

#pragma once

#include <vector>

#include "cpnv/rational.hpp"

namespace cpnv {

class SingularMatrixError : public std::domain_error {
  public:
    SingularMatrixError(int column, const std::string& what)
        : std::domain_error(what), column_(column) {}
    int column() const { return column_; }

  private:
    int column_;
};

class RatMatrix {
  public:
    RatMatrix(int rows, int cols);
    static RatMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    RatFn& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const RatFn& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    RatMatrix operator*(const RatMatrix& o) const;
    std::vector<RatFn> operator*(const std::vector<RatFn>& v) const;
    bool operator==(const RatMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }

  private:
    int rows_, cols_;
    std::vector<RatFn> e_;
};

// Exact solve of M x = b by Gaussian elimination; throws SingularMatrixError
// naming the column whose pivot vanished identically.
std::vector<RatFn> solve_linear(const RatMatrix& m, const std::vector<RatFn>& b);

RatMatrix invert(const RatMatrix& m);

}  // namespace cpnv
