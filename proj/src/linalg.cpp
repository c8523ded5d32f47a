#include "smc/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "smc/kernels.hpp"

namespace smc::linalg {

DenseMatrix SvdFactorization::reconstruct() const {
  // U diag(sigma) V^T
  DenseMatrix us = u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= sigma[j];
  return matmul_nt(us, v);
}

SvdFactorization svd(const DenseMatrix& m) {
  if (m.empty()) throw std::invalid_argument("svd: empty matrix");
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);

  DenseMatrix work = m;
  DenseMatrix u(m.rows(), static_cast<std::size_t>(k));
  DenseMatrix vt(static_cast<std::size_t>(k), m.cols());
  std::vector<double> s(static_cast<std::size_t>(k));

  lapack_int info = LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'S', rows, cols,
                                   work.data(), cols, s.data(), u.data(), k,
                                   vt.data(), cols);
  if (info != 0) {
    // dgesdd's divide-and-conquer occasionally fails to converge; dgesvd's
    // QR iteration is the slower, more robust fallback.
    work = m;
    std::vector<double> superb(static_cast<std::size_t>(k));
    info = LAPACKE_dgesvd(LAPACK_ROW_MAJOR, 'S', 'S', rows, cols, work.data(),
                          cols, s.data(), u.data(), k, vt.data(), cols,
                          superb.data());
    if (info != 0) throw SvdError("svd: iteration failed to converge");
  }
  return SvdFactorization{std::move(u), std::move(s), vt.transposed()};
}

std::vector<double> singular_values(const DenseMatrix& m) {
  if (m.empty()) throw std::invalid_argument("singular_values: empty matrix");
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  DenseMatrix work = m;
  std::vector<double> s(static_cast<std::size_t>(k));
  lapack_int info =
      LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'N', rows, cols, work.data(), cols,
                     s.data(), nullptr, rows, nullptr, cols);
  if (info != 0) {
    work = m;
    std::vector<double> superb(static_cast<std::size_t>(k));
    info = LAPACKE_dgesvd(LAPACK_ROW_MAJOR, 'N', 'N', rows, cols, work.data(),
                          cols, s.data(), nullptr, rows, nullptr, cols,
                          superb.data());
    if (info != 0) throw SvdError("singular_values: iteration failed to converge");
  }
  return s;
}

double min_singular(const DenseMatrix& m) {
  return singular_values(m).back();
}

double spectral_norm(const DenseMatrix& m) {
  return singular_values(m).front();
}

SchattenOrder::SchattenOrder(double q) : q_(q) {
  if (!(q >= 1.0)) throw std::domain_error("Schatten order must satisfy q >= 1");
}

double schatten_norm(const DenseMatrix& m, const SchattenOrder& q) {
  const std::vector<double> s = singular_values(m);
  if (q.is_infinite()) return s.front();
  if (q.value() == 1.0) {
    double acc = 0.0;
    for (double v : s) acc += v;
    return acc;
  }
  if (q.value() == 2.0) return std::sqrt(kernels::sum_sq(s.size(), s.data()));
  // general q: factor out the largest value for stable powers
  const double top = s.front();
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : s) acc += std::pow(v / top, q.value());
  return top * std::pow(acc, 1.0 / q.value());
}

bool is_numerically_singular(const DenseMatrix& b, double rcond) {
  if (b.rows() != b.cols())
    throw std::invalid_argument("is_numerically_singular: matrix not square");
  const std::vector<double> s = singular_values(b);
  if (s.front() == 0.0) return true;
  return s.back() <= rcond * s.front();
}

DenseMatrix right_divide(const DenseMatrix& y, const DenseMatrix& b) {
  if (b.rows() != b.cols())
    throw std::invalid_argument("right_divide: B must be square");
  if (y.cols() != b.rows())
    throw std::invalid_argument("right_divide: Y column count must match B");
  // X B = Y  <=>  B^T X^T = Y^T
  DenseMatrix bt = b.transposed();
  DenseMatrix xt = y.transposed();
  const lapack_int n = static_cast<lapack_int>(b.rows());
  const lapack_int nrhs = static_cast<lapack_int>(y.rows());
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  lapack_int info = LAPACKE_dgesv(LAPACK_ROW_MAJOR, n, nrhs, bt.data(), n,
                                  ipiv.data(), xt.data(), nrhs);
  if (info > 0) throw SingularMatrixError("right_divide: B is exactly singular");
  if (info < 0) throw std::runtime_error("right_divide: invalid LAPACK argument");
  return xt.transposed();
}

DenseMatrix pseudo_inverse(const DenseMatrix& m, double rcond) {
  const SvdFactorization f = svd(m);
  const double cutoff = rcond * (f.sigma.empty() ? 0.0 : f.sigma.front());
  // V diag(1/sigma) U^T over singular values above the cutoff
  DenseMatrix vs = f.v;
  for (std::size_t j = 0; j < vs.cols(); ++j) {
    const double inv = f.sigma[j] > cutoff ? 1.0 / f.sigma[j] : 0.0;
    for (std::size_t i = 0; i < vs.rows(); ++i) vs(i, j) *= inv;
  }
  return matmul_nt(vs, f.u);
}

DenseMatrix qr_q_positive(const DenseMatrix& m) {
  if (m.rows() < m.cols())
    throw std::invalid_argument("qr_q_positive: requires rows >= cols");
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  DenseMatrix work = m;
  std::vector<double> tau(static_cast<std::size_t>(cols));
  lapack_int info = LAPACKE_dgeqrf(LAPACK_ROW_MAJOR, rows, cols, work.data(),
                                   cols, tau.data());
  if (info != 0) throw std::runtime_error("qr_q_positive: dgeqrf failed");
  // R diagonal signs before the reflectors overwrite them
  std::vector<double> diag_sign(static_cast<std::size_t>(cols));
  for (std::size_t j = 0; j < static_cast<std::size_t>(cols); ++j)
    diag_sign[j] = work(j, j) < 0.0 ? -1.0 : 1.0;
  info = LAPACKE_dorgqr(LAPACK_ROW_MAJOR, rows, cols, cols, work.data(), cols,
                        tau.data());
  if (info != 0) throw std::runtime_error("qr_q_positive: dorgqr failed");
  for (std::size_t i = 0; i < work.rows(); ++i)
    for (std::size_t j = 0; j < work.cols(); ++j) work(i, j) *= diag_sign[j];
  return work;
}

}  // namespace smc::linalg
