#include "smc/expt.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace smc::expt {

std::string solver_name(const Solver& solver) {
  if (std::holds_alternative<SmcRow>(solver)) return "smc_row";
  if (std::holds_alternative<SmcCol>(solver)) return "smc_col";
  if (const auto* kr = std::get_if<SmcKnownRank>(&solver))
    return "smc_rank" + std::to_string(kr->r);
  return "nnm";
}

void ExperimentConfig::validate() const {
  if (m1 == 0 || m1 >= p1 || m2 == 0 || m2 >= p2)
    throw std::invalid_argument("ExperimentConfig: need 0 < m < p per side");
  if (reps < 1) throw std::invalid_argument("ExperimentConfig: reps >= 1");
  if (!(threshold_const > 0.0))
    throw std::invalid_argument("ExperimentConfig: threshold_const > 0");
  if (solvers.empty())
    throw std::invalid_argument("ExperimentConfig: no solvers requested");
  spectrum_values(spectrum, std::min(p1, p2));  // profile sanity
}

namespace {

void fill_losses(RunRecord& rec, const DenseMatrix& a22_hat,
                 const DenseMatrix& a22_true) {
  const DenseMatrix diff = a22_hat - a22_true;
  const std::vector<double> sd = linalg::singular_values(diff);
  const std::vector<double> st = linalg::singular_values(a22_true);
  auto norms = [](const std::vector<double>& s) {
    double spectral = s.empty() ? 0.0 : s.front();
    double fro = 0.0, nuc = 0.0;
    for (double v : s) {
      fro += v * v;
      nuc += v;
    }
    return std::array<double, 3>{spectral, std::sqrt(fro), nuc};
  };
  const auto nd = norms(sd);
  const auto nt = norms(st);
  rec.spectral_loss = nd[0];
  rec.frobenius_loss = nd[1];
  rec.nuclear_loss = nd[2];
  rec.rel_spectral = nt[0] > 0.0 ? nd[0] / nt[0] : nd[0];
  rec.rel_frobenius = nt[1] > 0.0 ? nd[1] / nt[1] : nd[1];
  rec.rel_nuclear = nt[2] > 0.0 ? nd[2] / nt[2] : nd[2];
}

DenseMatrix dispatch_solver(const Solver& solver, const ExperimentConfig& cfg,
                            const BlockPartition& blocks, std::uint64_t seed,
                            std::size_t* r_hat_out) {
  if (std::holds_alternative<SmcRow>(solver)) {
    const ThresholdPolicy policy(
        ThresholdMode::Row,
        cfg.threshold_const * std::sqrt(static_cast<double>(cfg.p1) /
                                        static_cast<double>(cfg.m1)));
    SmcResult res = recover_unknown_rank(blocks, policy);
    *r_hat_out = res.r_hat;
    return std::move(res.a22_hat);
  }
  if (std::holds_alternative<SmcCol>(solver)) {
    const ThresholdPolicy policy(
        ThresholdMode::Column,
        cfg.threshold_const * std::sqrt(static_cast<double>(cfg.p2) /
                                        static_cast<double>(cfg.m2)));
    SmcResult res = recover_unknown_rank(blocks, policy);
    *r_hat_out = res.r_hat;
    return std::move(res.a22_hat);
  }
  if (const auto* kr = std::get_if<SmcKnownRank>(&solver)) {
    *r_hat_out = kr->r;
    return recover_known_rank(blocks, kr->r);
  }
  const auto& nn = std::get<NnmSolver>(solver);
  nnm::NnmCompletion res = nnm::nnm_complete(blocks, nn.k_folds, nn.n_grid,
                                             nn.h_splits, seed, nn.options);
  *r_hat_out = 0;
  return std::move(res.a22_hat);
}

}  // namespace

std::vector<RunRecord> run_replication(const ExperimentConfig& cfg,
                                       std::size_t rep_index) {
  cfg.validate();
  const std::uint64_t seed = Rng::derive_seed(cfg.base_seed, rep_index);
  Rng rng(seed);
  const DenseMatrix a = synth::make_instance(cfg.p1, cfg.p2, cfg.spectrum, rng);
  const synth::SplitResult split =
      synth::split_blocks(a, cfg.m1, cfg.m2, cfg.scheme, rng);
  const DenseMatrix& a22_true = *split.blocks.a22;

  std::vector<RunRecord> records;
  records.reserve(cfg.solvers.size());
  for (const Solver& solver : cfg.solvers) {
    RunRecord rec;
    rec.solver = solver_name(solver);
    rec.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      std::size_t r_hat = 0;
      const DenseMatrix a22_hat =
          dispatch_solver(solver, cfg, split.blocks, seed, &r_hat);
      rec.r_hat = r_hat;
      fill_losses(rec, a22_hat, a22_true);
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
    rec.wall_time_s = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SolverStats> aggregate(const std::vector<RunRecord>& records) {
  std::vector<SolverStats> stats;
  auto find = [&stats](const std::string& name) -> SolverStats& {
    for (SolverStats& s : stats)
      if (s.solver == name) return s;
    stats.push_back(SolverStats{});
    stats.back().solver = name;
    return stats.back();
  };
  // two passes: means, then centered second moments
  for (const RunRecord& r : records) {
    SolverStats& s = find(r.solver);
    if (!r.ok) {
      ++s.failures;
      continue;
    }
    ++s.n;
    s.mean_rel_spectral += r.rel_spectral;
    s.mean_rel_frobenius += r.rel_frobenius;
    s.mean_rel_nuclear += r.rel_nuclear;
    s.mean_r_hat += static_cast<double>(r.r_hat);
  }
  for (SolverStats& s : stats) {
    if (s.n == 0) continue;
    const double n = static_cast<double>(s.n);
    s.mean_rel_spectral /= n;
    s.mean_rel_frobenius /= n;
    s.mean_rel_nuclear /= n;
    s.mean_r_hat /= n;
  }
  for (const RunRecord& r : records) {
    if (!r.ok) continue;
    SolverStats& s = find(r.solver);
    auto sq = [](double d) { return d * d; };
    s.sd_rel_spectral += sq(r.rel_spectral - s.mean_rel_spectral);
    s.sd_rel_frobenius += sq(r.rel_frobenius - s.mean_rel_frobenius);
    s.sd_rel_nuclear += sq(r.rel_nuclear - s.mean_rel_nuclear);
  }
  for (SolverStats& s : stats) {
    if (s.n < 2) {
      s.sd_rel_spectral = s.sd_rel_frobenius = s.sd_rel_nuclear = 0.0;
      continue;
    }
    const double denom = static_cast<double>(s.n - 1);
    s.sd_rel_spectral = std::sqrt(s.sd_rel_spectral / denom);
    s.sd_rel_frobenius = std::sqrt(s.sd_rel_frobenius / denom);
    s.sd_rel_nuclear = std::sqrt(s.sd_rel_nuclear / denom);
    const double root_n = std::sqrt(static_cast<double>(s.n));
    s.se_rel_spectral = s.sd_rel_spectral / root_n;
    s.se_rel_frobenius = s.sd_rel_frobenius / root_n;
    s.se_rel_nuclear = s.sd_rel_nuclear / root_n;
  }
  return stats;
}

namespace {

std::size_t worker_count() {
  if (const char* env = std::getenv("SMC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  return 1;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<RunRecord>> per_rep(cfg.reps);
  const std::size_t workers = std::min(worker_count(), cfg.reps);
  if (workers <= 1) {
    for (std::size_t rep = 0; rep < cfg.reps; ++rep)
      per_rep[rep] = run_replication(cfg, rep);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t rep = next.fetch_add(1); rep < cfg.reps;
             rep = next.fetch_add(1))
          per_rep[rep] = run_replication(cfg, rep);
      });
    for (std::thread& t : pool) t.join();
  }
  ExperimentResult result;
  for (auto& recs : per_rep)
    for (auto& r : recs) result.records.push_back(std::move(r));
  result.stats = aggregate(result.records);
  return result;
}

std::vector<double> subspace_alignment(const DenseMatrix& u_est,
                                       const DenseMatrix& u_true,
                                       std::size_t k) {
  if (u_est.rows() != u_true.rows())
    throw std::invalid_argument("subspace_alignment: row count mismatch");
  if (k == 0 || k > u_est.cols() || k > u_true.cols())
    throw std::invalid_argument("subspace_alignment: bad k");
  const DenseMatrix overlap =
      matmul_tn(u_est.block(0, 0, u_est.rows(), k),
                u_true.block(0, 0, u_true.rows(), k));
  std::vector<double> s = linalg::singular_values(overlap);
  for (double& v : s) v = std::clamp(v, 0.0, 1.0);
  return s;
}

}  // namespace smc::expt
