#ifndef SMC_NNM_HPP
#define SMC_NNM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "smc/completion.hpp"
#include "smc/matrix.hpp"

namespace smc::nnm {

// Set of observed entries of a p1 x p2 matrix.
class ObservationMask {
 public:
  ObservationMask(std::size_t p1, std::size_t p2,
                  std::vector<std::uint8_t> observed);

  // SMC pattern: the first m2 columns and the first m1 rows.
  static ObservationMask cross(std::size_t p1, std::size_t p2, std::size_t m1,
                               std::size_t m2);
  // Cross pattern restricted to a subset of the first m1 rows on the right
  // side: all of columns [0, m2) plus rows `right_rows` x columns [m2, p2).
  static ObservationMask cross_with_rows(std::size_t p1, std::size_t p2,
                                         std::size_t m2,
                                         const std::vector<std::size_t>& right_rows);

  std::size_t p1() const { return p1_; }
  std::size_t p2() const { return p2_; }
  bool observed(std::size_t i, std::size_t j) const {
    return observed_[i * p2_ + j] != 0;
  }
  const std::uint8_t* data() const { return observed_.data(); }
  std::size_t count() const;

 private:
  std::size_t p1_;
  std::size_t p2_;
  std::vector<std::uint8_t> observed_;
};

struct NnmConfig {
  double t = 0.0;           // nuclear-norm penalty, >= 0
  double tol = 1e-5;        // relative-change stopping rule
  std::size_t max_iter = 500;

  NnmConfig() = default;
  NnmConfig(double t_, double tol_, std::size_t max_iter_);
};

// U max(sigma - t, 0) V^T; only singular directions above t survive.
DenseMatrix soft_threshold_svd(const DenseMatrix& m, double t);

struct NnmSolution {
  DenseMatrix z;
  bool converged = false;
  std::size_t iterations = 0;
  // 0.5 * sum_Omega (Z - A)^2 + t * ||Z||_*, one value per iterate.
  std::vector<double> objective_trace;
};

// Soft-impute iteration Z <- SVT(P_Omega(A) + P_Omega_perp(Z), t) from
// Z0 = 0 (or a warm start) until the relative change falls under tol.
NnmSolution solve_penalized(const DenseMatrix& a_observed,
                            const ObservationMask& mask, const NnmConfig& cfg,
                            const DenseMatrix* warm_start = nullptr);

struct CvResult {
  double t_star = 0.0;
  std::vector<double> grid;   // descending penalty grid
  std::vector<double> risks;  // mean validation error per grid point
};

// Iteration controls shared by the CV fits and the final fit.
struct SolverOptions {
  double tol = 1e-5;
  std::size_t max_iter = 500;
  double cv_tol = 1e-5;
  std::size_t cv_max_iter = 500;
};

// Penalty selection by repeated random (K-1):1 row splits of the observed
// top block: fit on columns [0, m2) plus the first group's rows of A12,
// score on the held-out rows of A12, average over H splits.
CvResult cv_select_t(const BlockPartition& blocks, std::size_t k_folds,
                     std::size_t n_grid, std::size_t h_splits,
                     std::uint64_t seed,
                     const SolverOptions& options = SolverOptions{});

struct NnmCompletion {
  DenseMatrix a22_hat;
  CvResult cv;
  bool converged = false;
};

// CV then a full fit on the SMC observation pattern at the selected penalty.
NnmCompletion nnm_complete(const BlockPartition& blocks, std::size_t k_folds,
                           std::size_t n_grid, std::size_t h_splits,
                           std::uint64_t seed,
                           const SolverOptions& options = SolverOptions{});

}  // namespace smc::nnm

#endif  // SMC_NNM_HPP
