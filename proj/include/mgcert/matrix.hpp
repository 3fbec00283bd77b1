#pragma once

// Dense row-major matrix plumbing shared by every module. Everything here is
// desk scale: loops favor clarity and checkability over asymptotic tricks.

#include <cstddef>
#include <vector>

namespace mgcert {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);  // zero filled
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);
std::vector<double> operator*(const DenseMatrix& a, const std::vector<double>& x);

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix symmetrize(const DenseMatrix& a);  // (A + At) / 2, square input

double max_abs(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& a);
bool is_symmetric(const DenseMatrix& a, double rel_tol);

// Throws BadDimension / BadParameter on structural problems.
void require_square(const DenseMatrix& a, const char* label);
void require_finite(const DenseMatrix& a, const char* label);

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix concat_cols(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix submatrix(const DenseMatrix& a, const std::vector<std::size_t>& row_idx,
                      const std::vector<std::size_t>& col_idx);

double dot(const std::vector<double>& x, const std::vector<double>& y);
double norm2(const std::vector<double>& x);
std::vector<double> axpy(double alpha, const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mgcert
