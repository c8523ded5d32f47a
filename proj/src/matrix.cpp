#include "smc/matrix.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "smc/kernels.hpp"

namespace smc {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_)
    throw std::invalid_argument("DenseMatrix: entry count does not match shape");
  if (!all_finite())
    throw std::invalid_argument("DenseMatrix: non-finite entry");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_)
      throw std::invalid_argument("DenseMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  if (!all_finite())
    throw std::invalid_argument("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::block(std::size_t i0, std::size_t j0, std::size_t nrows,
                               std::size_t ncols) const {
  if (i0 + nrows > rows_ || j0 + ncols > cols_)
    throw std::out_of_range("DenseMatrix::block out of range");
  DenseMatrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    std::memcpy(out.row(i), row(i0 + i) + j0, ncols * sizeof(double));
  return out;
}

DenseMatrix DenseMatrix::rows_at(const std::vector<std::size_t>& idx) const {
  DenseMatrix out(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= rows_) throw std::out_of_range("rows_at: index out of range");
    std::memcpy(out.row(i), row(idx[i]), cols_ * sizeof(double));
  }
  return out;
}

DenseMatrix DenseMatrix::cols_at(const std::vector<std::size_t>& idx) const {
  DenseMatrix out(rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    if (idx[j] >= cols_) throw std::out_of_range("cols_at: index out of range");
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* src = row(i);
    double* dst = out.row(i);
    for (std::size_t j = 0; j < idx.size(); ++j) dst[j] = src[idx[j]];
  }
  return out;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

bool DenseMatrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("matrix addition: shape mismatch");
  DenseMatrix out = a;
  kernels::axpy(out.data_.size(), 1.0, b.data(), out.data());
  return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("matrix subtraction: shape mismatch");
  DenseMatrix out = a;
  kernels::axpy(out.data_.size(), -1.0, b.data(), out.data());
  return out;
}

DenseMatrix operator*(double s, const DenseMatrix& m) {
  DenseMatrix out = m;
  kernels::scale(out.data_.size(), s, out.data());
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  kernels::gemm_nn_acc(a.rows(), b.cols(), a.cols(), a.data(), a.cols(),
                       b.data(), b.cols(), c.data(), c.cols());
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  return matmul(a.transposed(), b);
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  return matmul(a, b.transposed());
}

DenseMatrix vstack(const DenseMatrix& top, const DenseMatrix& bottom) {
  if (top.cols() != bottom.cols())
    throw std::invalid_argument("vstack: column mismatch");
  DenseMatrix out(top.rows() + bottom.rows(), top.cols());
  std::memcpy(out.data(), top.data(), top.size() * sizeof(double));
  std::memcpy(out.data() + top.size(), bottom.data(),
              bottom.size() * sizeof(double));
  return out;
}

DenseMatrix hstack(const DenseMatrix& left, const DenseMatrix& right) {
  if (left.rows() != right.rows())
    throw std::invalid_argument("hstack: row mismatch");
  DenseMatrix out(left.rows(), left.cols() + right.cols());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    std::memcpy(out.row(i), left.row(i), left.cols() * sizeof(double));
    std::memcpy(out.row(i) + left.cols(), right.row(i),
                right.cols() * sizeof(double));
  }
  return out;
}

double frobenius(const DenseMatrix& m) {
  return std::sqrt(kernels::sum_sq(m.size(), m.data()));
}

double frobenius_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("frobenius_diff: shape mismatch");
  return std::sqrt(kernels::sq_diff_sum(a.size(), a.data(), b.data()));
}

}  // namespace smc
