#ifndef SMC_MATRIX_HPP
#define SMC_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace smc {

// Dense real matrix, double precision, row-major storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  // Validates shape consistency and entry finiteness.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(const std::vector<double>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  DenseMatrix block(std::size_t i0, std::size_t j0, std::size_t nrows,
                    std::size_t ncols) const;
  DenseMatrix rows_at(const std::vector<std::size_t>& idx) const;
  DenseMatrix cols_at(const std::vector<std::size_t>& idx) const;
  DenseMatrix transposed() const;

  // True when every entry is finite.
  bool all_finite() const;

  bool operator==(const DenseMatrix& other) const = default;

  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator*(double s, const DenseMatrix& m);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// C = A * B through the kernel layer.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// C = A^T * B
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// C = A * B^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

// [A; B] and [A, B]
DenseMatrix vstack(const DenseMatrix& top, const DenseMatrix& bottom);
DenseMatrix hstack(const DenseMatrix& left, const DenseMatrix& right);

double frobenius(const DenseMatrix& m);
double frobenius_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace smc

#endif  // SMC_MATRIX_HPP
