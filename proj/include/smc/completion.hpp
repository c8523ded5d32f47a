#ifndef SMC_COMPLETION_HPP
#define SMC_COMPLETION_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "smc/linalg.hpp"
#include "smc/matrix.hpp"

namespace smc {

// The four blocks of a p1 x p2 matrix split after row m1 and column m2.
// a11 (m1 x m2), a12 (m1 x (p2-m2)) and a21 ((p1-m1) x m2) are the observed
// blocks; a22 is unknown during imputation and carries the ground truth in
// evaluation settings.
struct BlockPartition {
  DenseMatrix a11;
  DenseMatrix a12;
  DenseMatrix a21;
  std::optional<DenseMatrix> a22;

  // Validates mutual shape consistency; throws std::invalid_argument.
  BlockPartition(DenseMatrix a11_, DenseMatrix a12_, DenseMatrix a21_,
                 std::optional<DenseMatrix> a22_ = std::nullopt);

  static BlockPartition from_full(const DenseMatrix& a, std::size_t m1,
                                  std::size_t m2);

  std::size_t m1() const { return a11.rows(); }
  std::size_t m2() const { return a11.cols(); }
  std::size_t p1() const { return a11.rows() + a21.rows(); }
  std::size_t p2() const { return a11.cols() + a12.cols(); }

  // Reassembles the full matrix; requires a22.
  DenseMatrix assemble() const;
};

enum class ThresholdMode { Row, Column };

struct ThresholdPolicy {
  ThresholdMode mode = ThresholdMode::Row;
  double threshold = 0.0;  // T_R or T_C, > 0
  double rcond = linalg::kDefaultRcond;

  ThresholdPolicy() = default;
  ThresholdPolicy(ThresholdMode mode_, double threshold_,
                  double rcond_ = linalg::kDefaultRcond);
};

// One rank-search step: candidate s with either the spectral norm of D_s or
// the numerically-singular flag.
struct DnormEntry {
  std::size_t s = 0;
  double d_norm = 0.0;
  bool singular = false;
};

struct SmcResult {
  DenseMatrix a22_hat;
  std::size_t r_hat = 0;
  std::vector<DnormEntry> d_norm_trace;
};

// Default thresholding level 2 * sqrt(p / m); requires 0 < m < p.
double default_threshold(std::size_t p, std::size_t m);

// A21 * pinv(A11) * A12; exact for matrices of exact rank with full-rank
// observed cross sections.
DenseMatrix schur_complete(const BlockPartition& blocks,
                           double rcond = linalg::kDefaultRcond);

// Rank-r estimator: A21 * N (M^T A11 N)^-1 M^T A12, where M and N span the
// leading-r left space of [A11, A12] and right space of [A11; A21].
DenseMatrix recover_known_rank(const BlockPartition& blocks, std::size_t r,
                               double rcond = linalg::kDefaultRcond);

// Rotation of the observed blocks into the bases of the cross SVDs:
// Z11 = U2^T A11 V1, Z12 = U2^T A12, Z21 = A21 V1.
struct TransformedBlocks {
  DenseMatrix z11;
  DenseMatrix z12;
  DenseMatrix z21;
};

TransformedBlocks transform_blocks(const BlockPartition& blocks);

// Rank search: largest s (scanning min(m1, m2) down to 1) whose leading
// Z11 block is nonsingular with ||D_s|| <= threshold; 0 when none qualifies.
// Row mode: D_s = Z21[:, :s] * Z11[:s, :s]^-1 against z_side = Z21.
// Column mode: D_s = Z11[:s, :s]^-1 * Z12[:s, :] against z_side = Z12.
struct RankEstimate {
  std::size_t r_hat = 0;
  std::vector<DnormEntry> trace;
};

RankEstimate estimate_rank(const DenseMatrix& z11, const DenseMatrix& z_side,
                           const ThresholdPolicy& policy);

// Full pipeline: transform, rank search, then
// Z21[:, :r] * Z11[:r, :r]^-1 * Z12[:r, :]; the zero matrix when r_hat = 0.
SmcResult recover_unknown_rank(const BlockPartition& blocks,
                               const ThresholdPolicy& policy);

}  // namespace smc

#endif  // SMC_COMPLETION_HPP
