#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "smc/completion.hpp"
#include "smc/expt.hpp"
#include "smc/io.hpp"
#include "smc/nnm.hpp"
#include "smc/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitValidation = 2;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

smc::BlockPartition load_blocks(const std::string& a11_path,
                                const std::string& a12_path,
                                const std::string& a21_path, bool header) {
  const smc::DenseMatrix a11 = smc::io::read_csv_matrix(a11_path, header);
  const smc::DenseMatrix a12 = smc::io::read_csv_matrix(a12_path, header);
  const smc::DenseMatrix a21 = smc::io::read_csv_matrix(a21_path, header);
  if (a12.rows() != a11.rows())
    throw ValidationError("a12 has " + std::to_string(a12.rows()) +
                          " rows but a11 has " + std::to_string(a11.rows()));
  if (a21.cols() != a11.cols())
    throw ValidationError("a21 has " + std::to_string(a21.cols()) +
                          " columns but a11 has " + std::to_string(a11.cols()));
  return smc::BlockPartition(a11, a12, a21);
}

int cmd_impute(const std::string& a11_path, const std::string& a12_path,
               const std::string& a21_path, const std::string& mode,
               std::optional<double> threshold, std::optional<std::size_t> rank,
               double rcond, bool header, const std::string& out_path) {
  if (rank.has_value() && threshold.has_value())
    throw ValidationError("--rank and --threshold are mutually exclusive");
  const smc::BlockPartition blocks =
      load_blocks(a11_path, a12_path, a21_path, header);

  if (rank.has_value()) {
    const smc::DenseMatrix a22 = smc::recover_known_rank(blocks, *rank, rcond);
    smc::io::write_csv_matrix(out_path, a22, header);
    std::cout << "r_hat=" << *rank << "\n";
    return kExitOk;
  }

  const bool row = mode == "row";
  const double t = threshold.value_or(
      row ? smc::default_threshold(blocks.p1(), blocks.m1())
          : smc::default_threshold(blocks.p2(), blocks.m2()));
  const smc::ThresholdPolicy policy(
      row ? smc::ThresholdMode::Row : smc::ThresholdMode::Column, t, rcond);
  const smc::SmcResult res = smc::recover_unknown_rank(blocks, policy);
  smc::io::write_csv_matrix(out_path, res.a22_hat, header);
  std::cout << "mode=" << mode << "\n";
  std::cout << "threshold=" << smc::io::format_double(t) << "\n";
  std::cout << "r_hat=" << res.r_hat << "\n";
  for (const smc::DnormEntry& e : res.d_norm_trace) {
    if (e.singular)
      std::cout << "d_norm s=" << e.s << " singular=1\n";
    else
      std::cout << "d_norm s=" << e.s
                << " value=" << smc::io::format_double(e.d_norm) << "\n";
  }
  if (res.r_hat == 0)
    std::cout << "warning=no rank passed the threshold; wrote a zero matrix\n";
  return kExitOk;
}

int cmd_spectrum(const std::string& in_path, bool header) {
  const smc::DenseMatrix m = smc::io::read_csv_matrix(in_path, header);
  for (double s : smc::linalg::singular_values(m))
    std::cout << smc::io::format_double(s) << "\n";
  return kExitOk;
}

int cmd_nnm(const std::string& a11_path, const std::string& a12_path,
            const std::string& a21_path, std::size_t k_folds,
            std::size_t n_grid, std::size_t h_splits, std::uint64_t seed,
            double tol, std::size_t max_iter, bool header,
            const std::string& out_path) {
  const smc::BlockPartition blocks =
      load_blocks(a11_path, a12_path, a21_path, header);
  smc::nnm::SolverOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  options.cv_tol = tol;
  options.cv_max_iter = max_iter;
  const smc::nnm::NnmCompletion res =
      smc::nnm::nnm_complete(blocks, k_folds, n_grid, h_splits, seed, options);
  smc::io::write_csv_matrix(out_path, res.a22_hat, header);
  std::cout << "t_star=" << smc::io::format_double(res.cv.t_star) << "\n";
  for (std::size_t i = 0; i < res.cv.grid.size(); ++i)
    std::cout << "risk t=" << smc::io::format_double(res.cv.grid[i])
              << " value=" << smc::io::format_double(res.cv.risks[i]) << "\n";
  if (!res.converged) std::cout << "warning=final fit hit max_iter\n";
  return kExitOk;
}

// ---- simulate -------------------------------------------------------------

const std::vector<std::string> kSimulateKeys = {
    "p1", "p2", "m1", "m2", "spectrum", "r", "g", "alpha", "values",
    "scheme", "solvers", "rank", "threshold_const", "reps", "seed",
    "nnm_k", "nnm_n", "nnm_h", "nnm_tol", "nnm_max_iter", "nnm_cv_tol",
    "nnm_cv_max_iter"};

struct SweepPoint {
  smc::synth::SpectrumProfile spectrum;
  double g = 0.0;       // 0 when not applicable
  double alpha = 0.0;   // 0 when not applicable
  std::size_t r = 0;
  double threshold_const = 2.0;
};

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
  const smc::io::KeyValueConfig cfg =
      smc::io::KeyValueConfig::parse_file(config_path);
  cfg.require_known_keys(kSimulateKeys);
  if (!cfg.has("seed"))
    throw smc::io::ConfigError(
        "config must set an explicit 'seed' (refusing unseeded runs)");

  smc::expt::ExperimentConfig base;
  base.p1 = static_cast<std::size_t>(cfg.get_int("p1"));
  base.p2 = static_cast<std::size_t>(cfg.get_int("p2"));
  base.m1 = static_cast<std::size_t>(cfg.get_int("m1"));
  base.m2 = static_cast<std::size_t>(cfg.get_int("m2"));
  base.reps = static_cast<std::size_t>(cfg.get_int("reps"));
  base.base_seed = static_cast<std::uint64_t>(cfg.get_int("seed"));

  const std::string scheme = cfg.get_or("scheme", "first");
  if (scheme == "first")
    base.scheme = smc::synth::SamplingScheme::FirstRowsCols;
  else if (scheme == "uniform")
    base.scheme = smc::synth::SamplingScheme::UniformWithoutReplacement;
  else if (scheme == "uniform_replace")
    base.scheme = smc::synth::SamplingScheme::UniformWithReplacement;
  else
    throw smc::io::ConfigError("scheme must be first|uniform|uniform_replace");

  smc::nnm::SolverOptions nnm_options;
  if (cfg.has("nnm_tol")) nnm_options.tol = cfg.get_double("nnm_tol");
  if (cfg.has("nnm_max_iter"))
    nnm_options.max_iter = static_cast<std::size_t>(cfg.get_int("nnm_max_iter"));
  nnm_options.cv_tol = nnm_options.tol;
  nnm_options.cv_max_iter = nnm_options.max_iter;
  if (cfg.has("nnm_cv_tol")) nnm_options.cv_tol = cfg.get_double("nnm_cv_tol");
  if (cfg.has("nnm_cv_max_iter"))
    nnm_options.cv_max_iter =
        static_cast<std::size_t>(cfg.get_int("nnm_cv_max_iter"));

  for (const std::string& name : cfg.get_list("solvers")) {
    if (name == "smc_row") {
      base.solvers.push_back(smc::expt::SmcRow{});
    } else if (name == "smc_col") {
      base.solvers.push_back(smc::expt::SmcCol{});
    } else if (name == "known_rank") {
      base.solvers.push_back(smc::expt::SmcKnownRank{
          static_cast<std::size_t>(cfg.get_int("rank"))});
    } else if (name == "nnm") {
      smc::expt::NnmSolver nn;
      if (cfg.has("nnm_k")) nn.k_folds = static_cast<std::size_t>(cfg.get_int("nnm_k"));
      if (cfg.has("nnm_n")) nn.n_grid = static_cast<std::size_t>(cfg.get_int("nnm_n"));
      if (cfg.has("nnm_h")) nn.h_splits = static_cast<std::size_t>(cfg.get_int("nnm_h"));
      nn.options = nnm_options;
      base.solvers.push_back(nn);
    } else {
      throw smc::io::ConfigError("unknown solver '" + name + "'");
    }
  }

  // sweep points: cartesian product of the listed spectrum parameter and
  // threshold constants
  const std::string spectrum_kind = cfg.get("spectrum");
  std::vector<SweepPoint> points;
  std::vector<double> consts = {2.0};
  if (cfg.has("threshold_const")) consts = cfg.get_double_list("threshold_const");
  if (spectrum_kind == "gap") {
    const std::size_t r = static_cast<std::size_t>(cfg.get_int("r"));
    for (double g : cfg.get_double_list("g"))
      for (double c : consts)
        points.push_back({smc::synth::GapSpectrum{r, g}, g, 0.0, r, c});
  } else if (spectrum_kind == "power") {
    for (double alpha : cfg.get_double_list("alpha"))
      for (double c : consts)
        points.push_back(
            {smc::synth::PowerSpectrum{alpha}, 0.0, alpha, 0, c});
  } else if (spectrum_kind == "explicit") {
    std::vector<double> values = cfg.get_double_list("values");
    for (double c : consts)
      points.push_back(
          {smc::synth::ExplicitSpectrum{values}, 0.0, 0.0, 0, c});
  } else {
    throw smc::io::ConfigError("spectrum must be gap|power|explicit");
  }

  std::ofstream out(out_path);
  if (!out) throw ValidationError("cannot write results file: " + out_path);
  out << "p1,p2,m1,m2,spectrum,r,g,alpha,threshold_const,solver,n,failures,"
         "mean_rel_spectral,sd_rel_spectral,se_rel_spectral,"
         "mean_rel_frobenius,sd_rel_frobenius,se_rel_frobenius,"
         "mean_r_hat,reps,seed\n";
  for (const SweepPoint& pt : points) {
    smc::expt::ExperimentConfig run = base;
    run.spectrum = pt.spectrum;
    run.threshold_const = pt.threshold_const;
    const smc::expt::ExperimentResult result = smc::expt::run_experiment(run);
    for (const smc::expt::SolverStats& s : result.stats) {
      out << run.p1 << ',' << run.p2 << ',' << run.m1 << ',' << run.m2 << ','
          << spectrum_kind << ',' << pt.r << ','
          << smc::io::format_double(pt.g) << ','
          << smc::io::format_double(pt.alpha) << ','
          << smc::io::format_double(pt.threshold_const) << ',' << s.solver
          << ',' << s.n << ',' << s.failures << ','
          << smc::io::format_double(s.mean_rel_spectral) << ','
          << smc::io::format_double(s.sd_rel_spectral) << ','
          << smc::io::format_double(s.se_rel_spectral) << ','
          << smc::io::format_double(s.mean_rel_frobenius) << ','
          << smc::io::format_double(s.sd_rel_frobenius) << ','
          << smc::io::format_double(s.se_rel_frobenius) << ','
          << smc::io::format_double(s.mean_r_hat) << ',' << run.reps << ','
          << run.base_seed << "\n";
    }
  }
  if (!out) throw ValidationError("write failed: " + out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Structured matrix completion: impute a missing bottom-right block "
      "from fully observed row and column blocks"};
  app.require_subcommand(1);

  // impute
  std::string a11_path, a12_path, a21_path, out_path, mode = "row";
  std::optional<double> threshold;
  std::optional<std::size_t> rank;
  double rcond = smc::linalg::kDefaultRcond;
  bool header = false;
  auto* impute = app.add_subcommand(
      "impute", "Recover the missing block from three observed block CSVs");
  impute->add_option("--a11", a11_path, "top-left observed block CSV")->required();
  impute->add_option("--a12", a12_path, "top-right observed block CSV")->required();
  impute->add_option("--a21", a21_path, "bottom-left observed block CSV")->required();
  impute->add_option("--out", out_path, "output CSV for the recovered block")->required();
  impute->add_option("--mode", mode, "thresholding side: row or col")
      ->check(CLI::IsMember({"row", "col"}));
  impute->add_option("--threshold", threshold,
                     "thresholding level (default 2*sqrt(p/m) for the mode)");
  impute->add_option("--rank", rank,
                     "use the known-rank estimator instead of rank search");
  impute->add_option("--rcond", rcond, "numerical-singularity tolerance");
  impute->add_flag("--header", header, "CSV files carry a header row");

  // simulate
  std::string config_path, results_path;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a replicated synthetic experiment from a config file");
  simulate->add_option("--config", config_path, "key=value config file")->required();
  simulate->add_option("--out", results_path, "output CSV of aggregated stats")->required();

  // nnm
  std::size_t k_folds = 5, n_grid = 10, h_splits = 5, max_iter = 500;
  std::uint64_t seed = 0;
  double tol = 1e-5;
  auto* nnm = app.add_subcommand(
      "nnm", "Nuclear-norm-minimization baseline with cross-validated penalty");
  nnm->add_option("--a11", a11_path, "top-left observed block CSV")->required();
  nnm->add_option("--a12", a12_path, "top-right observed block CSV")->required();
  nnm->add_option("--a21", a21_path, "bottom-left observed block CSV")->required();
  nnm->add_option("--out", out_path, "output CSV for the imputed block")->required();
  nnm->add_option("--folds", k_folds, "CV fold count K");
  nnm->add_option("--grid", n_grid, "penalty grid resolution N");
  nnm->add_option("--splits", h_splits, "number of random splits H");
  nnm->add_option("--seed", seed, "split seed")->required();
  nnm->add_option("--tol", tol, "solver convergence tolerance");
  nnm->add_option("--max-iter", max_iter, "solver iteration cap");
  nnm->add_flag("--header", header, "CSV files carry a header row");

  // spectrum
  std::string in_path;
  auto* spectrum = app.add_subcommand(
      "spectrum", "Print the singular values of a CSV matrix");
  spectrum->add_option("--in", in_path, "input CSV matrix")->required();
  spectrum->add_flag("--header", header, "CSV file carries a header row");

  CLI11_PARSE(app, argc, argv);

  try {
    if (impute->parsed())
      return cmd_impute(a11_path, a12_path, a21_path, mode, threshold, rank,
                        rcond, header, out_path);
    if (simulate->parsed()) return cmd_simulate(config_path, results_path);
    if (nnm->parsed())
      return cmd_nnm(a11_path, a12_path, a21_path, k_folds, n_grid, h_splits,
                     seed, tol, max_iter, header, out_path);
    if (spectrum->parsed()) return cmd_spectrum(in_path, header);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const smc::io::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}
