#ifndef SMC_EXPT_HPP
#define SMC_EXPT_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "smc/nnm.hpp"
#include "smc/synth.hpp"

namespace smc::expt {

// Solver variants compared in a run.
struct SmcRow {};
struct SmcCol {};
struct SmcKnownRank {
  std::size_t r;
};
struct NnmSolver {
  std::size_t k_folds = 5;
  std::size_t n_grid = 10;
  std::size_t h_splits = 5;
  nnm::SolverOptions options;
};

using Solver = std::variant<SmcRow, SmcCol, SmcKnownRank, NnmSolver>;

std::string solver_name(const Solver& solver);

struct ExperimentConfig {
  std::size_t p1 = 0, p2 = 0, m1 = 0, m2 = 0;
  synth::SpectrumProfile spectrum;
  synth::SamplingScheme scheme = synth::SamplingScheme::FirstRowsCols;
  std::vector<Solver> solvers;
  double threshold_const = 2.0;  // threshold = c * sqrt(p/m)
  std::size_t reps = 200;
  std::uint64_t base_seed = 0;

  void validate() const;
};

struct RunRecord {
  std::string solver;
  std::size_t r_hat = 0;
  double spectral_loss = 0.0;
  double frobenius_loss = 0.0;
  double nuclear_loss = 0.0;
  double rel_spectral = 0.0;
  double rel_frobenius = 0.0;
  double rel_nuclear = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
};

// One instance (seed derived from base_seed and rep_index, independent of
// the solver list), split, every requested solver, losses against the
// ground-truth block.
std::vector<RunRecord> run_replication(const ExperimentConfig& cfg,
                                       std::size_t rep_index);

struct SolverStats {
  std::string solver;
  std::size_t n = 0;        // successful runs
  std::size_t failures = 0;
  double mean_rel_spectral = 0.0, sd_rel_spectral = 0.0, se_rel_spectral = 0.0;
  double mean_rel_frobenius = 0.0, sd_rel_frobenius = 0.0,
         se_rel_frobenius = 0.0;
  double mean_rel_nuclear = 0.0, sd_rel_nuclear = 0.0, se_rel_nuclear = 0.0;
  double mean_r_hat = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // ordered by (rep, solver)
  std::vector<SolverStats> stats;  // one row per solver
};

// Per-solver mean / sample SD / standard error over replications. Replication
// order never affects the output; SMC_THREADS > 1 runs replications on a
// small thread pool.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Aggregation used by run_experiment, exposed for independent checking.
std::vector<SolverStats> aggregate(const std::vector<RunRecord>& records);

// Canonical correlations between the leading-k columns of two orthonormal
// bases: singular values of U_est[:, :k]^T U_true[:, :k], clamped to [0, 1].
std::vector<double> subspace_alignment(const DenseMatrix& u_est,
                                       const DenseMatrix& u_true,
                                       std::size_t k);

}  // namespace smc::expt

#endif  // SMC_EXPT_HPP
