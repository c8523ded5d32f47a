#include "smc/nnm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "smc/kernels.hpp"
#include "smc/rng.hpp"

namespace smc::nnm {

ObservationMask::ObservationMask(std::size_t p1, std::size_t p2,
                                 std::vector<std::uint8_t> observed)
    : p1_(p1), p2_(p2), observed_(std::move(observed)) {
  if (observed_.size() != p1_ * p2_)
    throw std::invalid_argument("ObservationMask: size mismatch");
  if (count() == 0)
    throw std::invalid_argument("ObservationMask: empty observation set");
}

ObservationMask ObservationMask::cross(std::size_t p1, std::size_t p2,
                                       std::size_t m1, std::size_t m2) {
  if (m1 == 0 || m1 > p1 || m2 == 0 || m2 > p2)
    throw std::invalid_argument("ObservationMask::cross: bad block sizes");
  std::vector<std::uint8_t> obs(p1 * p2, 0);
  for (std::size_t i = 0; i < p1; ++i)
    for (std::size_t j = 0; j < m2; ++j) obs[i * p2 + j] = 1;
  for (std::size_t i = 0; i < m1; ++i)
    for (std::size_t j = m2; j < p2; ++j) obs[i * p2 + j] = 1;
  return ObservationMask(p1, p2, std::move(obs));
}

ObservationMask ObservationMask::cross_with_rows(
    std::size_t p1, std::size_t p2, std::size_t m2,
    const std::vector<std::size_t>& right_rows) {
  std::vector<std::uint8_t> obs(p1 * p2, 0);
  for (std::size_t i = 0; i < p1; ++i)
    for (std::size_t j = 0; j < m2; ++j) obs[i * p2 + j] = 1;
  for (std::size_t i : right_rows) {
    if (i >= p1)
      throw std::invalid_argument("cross_with_rows: row index out of range");
    for (std::size_t j = m2; j < p2; ++j) obs[i * p2 + j] = 1;
  }
  return ObservationMask(p1, p2, std::move(obs));
}

std::size_t ObservationMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(observed_.begin(), observed_.end(),
                    [](std::uint8_t v) { return v != 0; }));
}

NnmConfig::NnmConfig(double t_, double tol_, std::size_t max_iter_)
    : t(t_), tol(tol_), max_iter(max_iter_) {
  if (!(t >= 0.0)) throw std::invalid_argument("NnmConfig: t must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("NnmConfig: tol must be > 0");
  if (max_iter < 1)
    throw std::invalid_argument("NnmConfig: max_iter must be >= 1");
}

namespace {

// SVT with the rank-truncated reconstruction; also reports the nuclear norm
// of the result.
DenseMatrix svt(const DenseMatrix& m, double t, double* nuclear_out) {
  linalg::SvdFactorization f = linalg::svd(m);
  std::size_t keep = 0;
  double nuclear = 0.0;
  for (double s : f.sigma) {
    if (s > t) {
      nuclear += s - t;
      ++keep;
    } else {
      break;
    }
  }
  if (nuclear_out != nullptr) *nuclear_out = nuclear;
  if (keep == 0) return DenseMatrix(m.rows(), m.cols());
  DenseMatrix us = f.u.block(0, 0, f.u.rows(), keep);
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < keep; ++j) us(i, j) *= f.sigma[j] - t;
  return matmul_nt(us, f.v.block(0, 0, f.v.rows(), keep));
}

}  // namespace

DenseMatrix soft_threshold_svd(const DenseMatrix& m, double t) {
  if (!(t >= 0.0))
    throw std::invalid_argument("soft_threshold_svd: t must be >= 0");
  return svt(m, t, nullptr);
}

NnmSolution solve_penalized(const DenseMatrix& a_observed,
                            const ObservationMask& mask, const NnmConfig& cfg,
                            const DenseMatrix* warm_start) {
  if (a_observed.rows() != mask.p1() || a_observed.cols() != mask.p2())
    throw std::invalid_argument("solve_penalized: data/mask shape mismatch");
  if (!(cfg.t >= 0.0) || !(cfg.tol > 0.0) || cfg.max_iter < 1)
    throw std::invalid_argument("solve_penalized: invalid config");

  NnmSolution sol;
  sol.z = warm_start != nullptr ? *warm_start
                                : DenseMatrix(mask.p1(), mask.p2());
  DenseMatrix work(mask.p1(), mask.p2());
  for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
    // P_Omega(A) + P_Omega_perp(Z)
    work = sol.z;
    kernels::masked_assign(work.size(), work.data(), a_observed.data(),
                           mask.data());
    double nuclear = 0.0;
    DenseMatrix next = svt(work, cfg.t, &nuclear);
    const double fit = kernels::masked_sq_diff_sum(
        next.size(), next.data(), a_observed.data(), mask.data());
    sol.objective_trace.push_back(0.5 * fit + cfg.t * nuclear);

    const double change = frobenius_diff(next, sol.z);
    const double scale = std::max(1.0, frobenius(sol.z));
    sol.z = std::move(next);
    sol.iterations = iter + 1;
    if (change <= cfg.tol * scale) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

namespace {

std::vector<double> penalty_grid(double t_max, std::size_t n_grid) {
  std::vector<double> grid;
  grid.reserve(n_grid + 1);
  for (std::size_t k = 0; k <= n_grid; ++k)
    grid.push_back(t_max * std::pow(10.0, -3.0 * static_cast<double>(k) /
                                              static_cast<double>(n_grid)));
  return grid;
}

// Observed data embedded in a full p1 x p2 matrix, zero elsewhere.
DenseMatrix embed_observed(const BlockPartition& blocks) {
  DenseMatrix a(blocks.p1(), blocks.p2());
  const std::size_t m1 = blocks.m1();
  const std::size_t m2 = blocks.m2();
  for (std::size_t i = 0; i < m1; ++i) {
    for (std::size_t j = 0; j < m2; ++j) a(i, j) = blocks.a11(i, j);
    for (std::size_t j = m2; j < blocks.p2(); ++j)
      a(i, j) = blocks.a12(i, j - m2);
  }
  for (std::size_t i = m1; i < blocks.p1(); ++i)
    for (std::size_t j = 0; j < m2; ++j) a(i, j) = blocks.a21(i - m1, j);
  return a;
}

}  // namespace

CvResult cv_select_t(const BlockPartition& blocks, std::size_t k_folds,
                     std::size_t n_grid, std::size_t h_splits,
                     std::uint64_t seed, const SolverOptions& options) {
  if (k_folds < 2) throw std::invalid_argument("cv_select_t: need K >= 2");
  if (n_grid < 1) throw std::invalid_argument("cv_select_t: need N >= 1");
  if (h_splits < 1) throw std::invalid_argument("cv_select_t: need H >= 1");
  const std::size_t m1 = blocks.m1();
  const std::size_t m2 = blocks.m2();
  if (m1 < k_folds)
    throw std::invalid_argument("cv_select_t: need m1 >= K for the row split");

  const std::size_t hold = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(
             static_cast<double>(m1) / static_cast<double>(k_folds))));
  if (hold >= m1)
    throw std::invalid_argument("cv_select_t: degenerate split (empty J1)");

  const DenseMatrix a_full = embed_observed(blocks);
  CvResult result;
  result.grid = penalty_grid(linalg::spectral_norm(a_full), n_grid);
  result.risks.assign(result.grid.size(), 0.0);

  for (std::size_t h = 0; h < h_splits; ++h) {
    Rng rng(Rng::derive_seed(seed, h));
    std::vector<std::size_t> perm(m1);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i + 1 < perm.size(); ++i) {
      const std::size_t j = i + rng.uniform_below(perm.size() - i);
      std::swap(perm[i], perm[j]);
    }
    const std::vector<std::size_t> j2(perm.begin(), perm.begin() + hold);
    const std::vector<std::size_t> j1(perm.begin() + hold, perm.end());
    const ObservationMask fit_mask =
        ObservationMask::cross_with_rows(blocks.p1(), blocks.p2(), m2, j1);

    DenseMatrix warm(blocks.p1(), blocks.p2());
    for (std::size_t k = 0; k < result.grid.size(); ++k) {
      const NnmConfig cfg(result.grid[k], options.cv_tol, options.cv_max_iter);
      const NnmSolution sol = solve_penalized(a_full, fit_mask, cfg, &warm);
      warm = sol.z;
      double err = 0.0;
      for (std::size_t row : j2)
        for (std::size_t jcol = m2; jcol < blocks.p2(); ++jcol) {
          const double d = sol.z(row, jcol) - a_full(row, jcol);
          err += d * d;
        }
      result.risks[k] += err;
    }
  }
  for (double& r : result.risks) r /= static_cast<double>(h_splits);
  const std::size_t best = static_cast<std::size_t>(
      std::min_element(result.risks.begin(), result.risks.end()) -
      result.risks.begin());
  result.t_star = result.grid[best];
  return result;
}

NnmCompletion nnm_complete(const BlockPartition& blocks, std::size_t k_folds,
                           std::size_t n_grid, std::size_t h_splits,
                           std::uint64_t seed, const SolverOptions& options) {
  CvResult cv = cv_select_t(blocks, k_folds, n_grid, h_splits, seed, options);
  const DenseMatrix a_full = embed_observed(blocks);
  const ObservationMask mask =
      ObservationMask::cross(blocks.p1(), blocks.p2(), blocks.m1(), blocks.m2());
  // Fit down the grid to t_star with warm starts: a cold start at a small
  // penalty needs an iteration count that grows like 1/t, while each
  // warm-started step converges in a few dozen iterations.
  NnmSolution sol;
  DenseMatrix warm(blocks.p1(), blocks.p2());
  for (double t : cv.grid) {
    if (t < cv.t_star) break;
    sol = solve_penalized(a_full, mask, NnmConfig(t, options.tol, options.max_iter),
                          &warm);
    warm = sol.z;
  }
  DenseMatrix a22 =
      sol.z.block(blocks.m1(), blocks.m2(), blocks.p1() - blocks.m1(),
                  blocks.p2() - blocks.m2());
  return NnmCompletion{std::move(a22), std::move(cv), sol.converged};
}

}  // namespace smc::nnm
