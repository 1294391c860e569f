#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "isac/fp_baseline.hpp"
#include "isac/maxmin_smooth.hpp"

namespace isac {

enum class SolverKind { kAlg1, kFp };
enum class SolverSet { kAlg1, kFp, kBoth };
enum class ExperimentKind { kConvergence, kTradeoff, kUserSweep, kFairness, kTiming };

std::string to_string(SolverKind s);
std::string to_string(ExperimentKind k);
SolverSet parse_solver_set(const std::string& s);
ExperimentKind parse_experiment_kind(const std::string& s);
std::vector<SolverKind> expand(SolverSet set);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kConvergence;
  SystemConfig base = default_config();
  std::uint64_t master_seed = 1;
  int n_realizations = 100;
  SolverSet solvers = SolverSet::kBoth;
  std::vector<double> mu_list = {1.0, 10.0, 100.0};
  std::vector<double> delta_list;  // empty: per-kind default
  std::vector<int> users_list = {2, 4, 6, 8, 10, 12};
  SolverOptions alg1;
  FpOptions fp;
  /// 0 selects ISAC_THREADS or the hardware concurrency.
  int threads = 0;
  std::filesystem::path out_dir = ".";

  void validate() const;
};

/// Tradeoff grid used when no delta list is given.
std::vector<double> default_tradeoff_deltas();

/// Outcome of one solve on one realization.
struct RealizationOutcome {
  MetricsReport report;
  RunTrace trace;
  double seconds = 0.0;
};

/// Solves realizations 0..n-1 of cfg (seed of realization r is
/// derive_seed(master_seed, r)) in parallel. Output order is realization
/// order regardless of the thread count.
std::vector<RealizationOutcome> run_realizations(
    const SystemConfig& cfg, std::uint64_t master_seed, int n,
    SolverKind solver, const SolverOptions& alg1, const FpOptions& fp,
    int threads = 0);

/// Number of worker threads for `requested` (0 = ISAC_THREADS env or hw).
int resolve_threads(int requested);

/// One aggregated sample of a sweep.
struct SweepPoint {
  SolverKind solver;
  int n_users;
  double delta;
  double mu;
  double mean_min_sinr_db;
  double mean_min_scnr_db;
  double mean_seconds;
};

/// Averaged iteration trace (shorter traces are extended with their last value).
struct ConvergenceCurve {
  SolverKind solver;
  double mu;
  std::vector<double> surrogate;
  std::vector<double> objective_p1;
  std::vector<double> objective_p2;
  std::vector<double> min_sinr_db;
  std::vector<double> min_scnr_db;
  double mean_seconds = 0.0;
};

struct FairnessRow {
  SolverKind solver;
  std::vector<double> sinr_db;  // per user, averaged over realizations
  std::vector<double> scnr_db;  // per target
  double mean_min_sinr_db = 0.0;
  double mean_min_scnr_db = 0.0;
  double spread_of_means_db = 0.0;     // max - min of sinr_db
  double mean_realization_spread_db = 0.0;
};

std::vector<ConvergenceCurve> run_convergence(const ExperimentSpec& spec);
std::vector<SweepPoint> run_tradeoff(const ExperimentSpec& spec);
std::vector<SweepPoint> run_user_sweep(const ExperimentSpec& spec);
std::vector<FairnessRow> run_fairness_table(const ExperimentSpec& spec);
std::vector<SweepPoint> run_timing(const ExperimentSpec& spec);

/// Runs spec.kind and writes its CSV files and plot script into
/// spec.out_dir. Returns the paths written.
std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec);

/// "# config_hash=<hex> seed=<u64> version=<string>"
std::string provenance_line(const ExperimentSpec& spec);

}  // namespace isac
