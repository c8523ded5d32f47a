#include "smc/completion.hpp"

#include <cmath>
#include <string>

namespace smc {

BlockPartition::BlockPartition(DenseMatrix a11_, DenseMatrix a12_,
                               DenseMatrix a21_, std::optional<DenseMatrix> a22_)
    : a11(std::move(a11_)),
      a12(std::move(a12_)),
      a21(std::move(a21_)),
      a22(std::move(a22_)) {
  if (a11.empty()) throw std::invalid_argument("BlockPartition: a11 is empty");
  if (a12.empty()) throw std::invalid_argument("BlockPartition: a12 is empty");
  if (a21.empty()) throw std::invalid_argument("BlockPartition: a21 is empty");
  if (a12.rows() != a11.rows())
    throw std::invalid_argument("BlockPartition: a12 row count must equal a11's");
  if (a21.cols() != a11.cols())
    throw std::invalid_argument(
        "BlockPartition: a21 column count must equal a11's");
  if (a22.has_value() &&
      (a22->rows() != a21.rows() || a22->cols() != a12.cols()))
    throw std::invalid_argument(
        "BlockPartition: a22 shape must be a21.rows x a12.cols");
}

BlockPartition BlockPartition::from_full(const DenseMatrix& a, std::size_t m1,
                                         std::size_t m2) {
  if (m1 == 0 || m1 >= a.rows() || m2 == 0 || m2 >= a.cols())
    throw std::invalid_argument("from_full: need 0 < m1 < p1 and 0 < m2 < p2");
  return BlockPartition(
      a.block(0, 0, m1, m2), a.block(0, m2, m1, a.cols() - m2),
      a.block(m1, 0, a.rows() - m1, m2),
      a.block(m1, m2, a.rows() - m1, a.cols() - m2));
}

DenseMatrix BlockPartition::assemble() const {
  if (!a22.has_value())
    throw std::invalid_argument("assemble: a22 is not populated");
  return vstack(hstack(a11, a12), hstack(a21, *a22));
}

ThresholdPolicy::ThresholdPolicy(ThresholdMode mode_, double threshold_,
                                 double rcond_)
    : mode(mode_), threshold(threshold_), rcond(rcond_) {
  if (!(threshold > 0.0))
    throw std::invalid_argument("ThresholdPolicy: threshold must be positive");
  if (!(rcond > 0.0 && rcond < 1.0))
    throw std::invalid_argument("ThresholdPolicy: rcond must be in (0, 1)");
}

double default_threshold(std::size_t p, std::size_t m) {
  if (m == 0 || m >= p)
    throw std::domain_error("default_threshold: need 0 < m < p");
  return 2.0 * std::sqrt(static_cast<double>(p) / static_cast<double>(m));
}

DenseMatrix schur_complete(const BlockPartition& blocks, double rcond) {
  return matmul(matmul(blocks.a21, linalg::pseudo_inverse(blocks.a11, rcond)),
                blocks.a12);
}

DenseMatrix recover_known_rank(const BlockPartition& blocks, std::size_t r,
                               double rcond) {
  if (r == 0 || r > std::min(blocks.m1(), blocks.m2()))
    throw std::invalid_argument(
        "recover_known_rank: r must satisfy 1 <= r <= min(m1, m2)");
  const linalg::SvdFactorization col_svd =
      linalg::svd(vstack(blocks.a11, blocks.a21));  // A_{.1}
  const linalg::SvdFactorization row_svd =
      linalg::svd(hstack(blocks.a11, blocks.a12));  // A_{1.}
  const DenseMatrix m_hat = row_svd.u.block(0, 0, row_svd.u.rows(), r);
  const DenseMatrix n_hat = col_svd.v.block(0, 0, col_svd.v.rows(), r);

  const DenseMatrix middle = matmul_tn(m_hat, matmul(blocks.a11, n_hat));
  if (linalg::is_numerically_singular(middle, rcond))
    throw linalg::SingularMatrixError(
        "recover_known_rank: M^T A11 N is numerically singular; r = " +
        std::to_string(r) + " likely exceeds the usable rank");
  const DenseMatrix left =
      linalg::right_divide(matmul(blocks.a21, n_hat), middle);
  return matmul(left, matmul_tn(m_hat, blocks.a12));
}

TransformedBlocks transform_blocks(const BlockPartition& blocks) {
  const linalg::SvdFactorization col_svd =
      linalg::svd(vstack(blocks.a11, blocks.a21));  // A_{.1} = U1 S1 V1^T
  const linalg::SvdFactorization row_svd =
      linalg::svd(hstack(blocks.a11, blocks.a12));  // A_{1.} = U2 S2 V2^T
  const DenseMatrix& v1 = col_svd.v;
  const DenseMatrix& u2 = row_svd.u;
  return TransformedBlocks{
      matmul_tn(u2, matmul(blocks.a11, v1)),  // Z11
      matmul_tn(u2, blocks.a12),              // Z12
      matmul(blocks.a21, v1),                 // Z21
  };
}

namespace {

// Residual guard on top of the LU solve; a step whose backward error is this
// far above roundoff behaves like a singular block in the rank search.
constexpr double kResidualTol = 1e-6;

// D for one candidate s, or nullopt when the solve must be treated as
// singular despite passing the rcond screen.
std::optional<DenseMatrix> d_matrix(const DenseMatrix& z11_s,
                                    const DenseMatrix& z_side, std::size_t s,
                                    ThresholdMode mode) {
  if (mode == ThresholdMode::Row) {
    const DenseMatrix y = z_side.block(0, 0, z_side.rows(), s);
    DenseMatrix d = linalg::right_divide(y, z11_s);
    if (frobenius_diff(matmul(d, z11_s), y) >
        kResidualTol * std::max(1.0, frobenius(y)))
      return std::nullopt;
    return d;
  }
  const DenseMatrix y = z_side.block(0, 0, s, z_side.cols());
  // Z11[:s,:s] D = Y  <=>  D^T Z11^T = Y^T
  DenseMatrix d =
      linalg::right_divide(y.transposed(), z11_s.transposed()).transposed();
  if (frobenius_diff(matmul(z11_s, d), y) >
      kResidualTol * std::max(1.0, frobenius(y)))
    return std::nullopt;
  return d;
}

}  // namespace

RankEstimate estimate_rank(const DenseMatrix& z11, const DenseMatrix& z_side,
                           const ThresholdPolicy& policy) {
  if (!(policy.threshold > 0.0))
    throw std::invalid_argument("estimate_rank: invalid policy threshold");
  const std::size_t s_max = std::min(z11.rows(), z11.cols());
  RankEstimate est;
  for (std::size_t s = s_max; s >= 1; --s) {
    const DenseMatrix z11_s = z11.block(0, 0, s, s);
    if (linalg::is_numerically_singular(z11_s, policy.rcond)) {
      est.trace.push_back({s, 0.0, true});
      continue;
    }
    std::optional<DenseMatrix> d;
    try {
      d = d_matrix(z11_s, z_side, s, policy.mode);
    } catch (const linalg::SingularMatrixError&) {
      d = std::nullopt;
    }
    if (!d.has_value()) {
      est.trace.push_back({s, 0.0, true});
      continue;
    }
    const double norm = linalg::spectral_norm(*d);
    est.trace.push_back({s, norm, false});
    if (norm <= policy.threshold) {
      est.r_hat = s;
      break;
    }
  }
  return est;
}

SmcResult recover_unknown_rank(const BlockPartition& blocks,
                               const ThresholdPolicy& policy) {
  const TransformedBlocks z = transform_blocks(blocks);
  const DenseMatrix& z_side =
      policy.mode == ThresholdMode::Row ? z.z21 : z.z12;
  RankEstimate est = estimate_rank(z.z11, z_side, policy);

  const std::size_t out_rows = blocks.p1() - blocks.m1();
  const std::size_t out_cols = blocks.p2() - blocks.m2();
  if (est.r_hat == 0)
    return SmcResult{DenseMatrix(out_rows, out_cols), 0, std::move(est.trace)};

  const std::size_t r = est.r_hat;
  const DenseMatrix z11_r = z.z11.block(0, 0, r, r);
  const DenseMatrix left =
      linalg::right_divide(z.z21.block(0, 0, z.z21.rows(), r), z11_r);
  DenseMatrix a22_hat = matmul(left, z.z12.block(0, 0, r, z.z12.cols()));
  return SmcResult{std::move(a22_hat), r, std::move(est.trace)};
}

}  // namespace smc
