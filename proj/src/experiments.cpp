#include "isac/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "isac/csv.hpp"

#ifndef ISAC_VERSION
#define ISAC_VERSION "dev"
#endif

namespace isac {

namespace fs = std::filesystem;

std::string to_string(SolverKind s) {
  return s == SolverKind::kAlg1 ? "alg1" : "fp";
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kConvergence: return "convergence";
    case ExperimentKind::kTradeoff: return "tradeoff";
    case ExperimentKind::kUserSweep: return "usersweep";
    case ExperimentKind::kFairness: return "fairness";
    case ExperimentKind::kTiming: return "timing";
  }
  return "?";
}

SolverSet parse_solver_set(const std::string& s) {
  if (s == "alg1") return SolverSet::kAlg1;
  if (s == "fp") return SolverSet::kFp;
  if (s == "both") return SolverSet::kBoth;
  throw InvalidArgument("unknown solver '" + s + "' (alg1|fp|both)");
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::kConvergence, ExperimentKind::kTradeoff,
                 ExperimentKind::kUserSweep, ExperimentKind::kFairness,
                 ExperimentKind::kTiming}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown experiment '" + s + "'");
}

std::vector<SolverKind> expand(SolverSet set) {
  switch (set) {
    case SolverSet::kAlg1: return {SolverKind::kAlg1};
    case SolverSet::kFp: return {SolverKind::kFp};
    case SolverSet::kBoth: return {SolverKind::kAlg1, SolverKind::kFp};
  }
  return {};
}

std::vector<double> default_tradeoff_deltas() {
  return {0.0, 0.01, 0.1, 1.0, 10.0, 100.0, 1e4, 1e6};
}

void ExperimentSpec::validate() const {
  base.validate();
  alg1.validate();
  if (n_realizations < 1) {
    throw InvalidArgument("experiment: realizations must be >= 1");
  }
  if (kind == ExperimentKind::kConvergence && mu_list.empty()) {
    throw InvalidArgument("experiment: empty mu list");
  }
  if ((kind == ExperimentKind::kUserSweep || kind == ExperimentKind::kTiming) &&
      users_list.empty()) {
    throw InvalidArgument("experiment: empty user list");
  }
  for (double mu : mu_list) {
    if (!(mu > 0.0)) throw InvalidArgument("experiment: mu must be > 0");
  }
  for (double d : delta_list) {
    if (!(d >= 0.0)) throw InvalidArgument("experiment: delta must be >= 0");
  }
  for (int k : users_list) {
    if (k < 1) throw InvalidArgument("experiment: user counts must be >= 1");
  }
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ISAC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RealizationOutcome> run_realizations(
    const SystemConfig& cfg, std::uint64_t master_seed, int n,
    SolverKind solver, const SolverOptions& alg1, const FpOptions& fp,
    int threads) {
  std::vector<RealizationOutcome> out(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (int r = next++; r < n; r = next++) {
      try {
        SystemConfig c = cfg;
        c.seed = derive_seed(master_seed, static_cast<std::uint64_t>(r));
        const Scene scene = generate_scene(c);
        const auto t0 = std::chrono::steady_clock::now();
        SolveResult res = solver == SolverKind::kAlg1 ? solve(scene, c, alg1)
                                                      : solve_fp(scene, c, fp);
        const auto t1 = std::chrono::steady_clock::now();
        auto& o = out[static_cast<std::size_t>(r)];
        o.seconds = std::chrono::duration<double>(t1 - t0).count();
        o.report = evaluate(scene, res.beamformers, c.delta);
        o.trace = std::move(res.trace);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };

  const int nt = std::min(resolve_threads(threads), n);
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

SweepPoint aggregate(SolverKind solver, int k, double delta, double mu,
                     const std::vector<RealizationOutcome>& outs) {
  std::vector<double> sinr, scnr, secs;
  for (const auto& o : outs) {
    sinr.push_back(to_db(o.report.min_sinr));
    scnr.push_back(to_db(o.report.min_scnr));
    secs.push_back(o.seconds);
  }
  return {solver, k, delta, mu, mean(sinr), mean(scnr), mean(secs)};
}

std::vector<double> deltas_or(const ExperimentSpec& spec,
                              std::vector<double> fallback) {
  return spec.delta_list.empty() ? fallback : spec.delta_list;
}

SolverOptions alg1_with_mu(const ExperimentSpec& spec, double mu) {
  SolverOptions o = spec.alg1;
  o.mu = mu;
  return o;
}

}  // namespace

std::vector<ConvergenceCurve> run_convergence(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ConvergenceCurve> curves;
  SystemConfig cfg = spec.base;
  if (!spec.delta_list.empty()) cfg.delta = spec.delta_list.front();
  for (SolverKind solver : expand(spec.solvers)) {
    const std::vector<double> mus =
        solver == SolverKind::kAlg1 ? spec.mu_list : std::vector<double>{0.0};
    for (double mu : mus) {
      const auto outs = run_realizations(
          cfg, spec.master_seed, spec.n_realizations, solver,
          alg1_with_mu(spec, mu > 0.0 ? mu : spec.alg1.mu), spec.fp,
          spec.threads);
      std::size_t len = 0;
      for (const auto& o : outs) len = std::max(len, o.trace.entries.size());
      ConvergenceCurve c{solver, mu, {}, {}, {}, {}, {}, 0.0};
      for (std::size_t i = 0; i < len; ++i) {
        std::vector<double> s, p1, p2, si, sc;
        for (const auto& o : outs) {
          const auto& e = o.trace.entries[std::min(i, o.trace.entries.size() - 1)];
          s.push_back(e.surrogate);
          p1.push_back(e.objective_p1);
          p2.push_back(e.objective_p2);
          si.push_back(to_db(e.sinr.minCoeff()));
          sc.push_back(to_db(e.scnr.minCoeff()));
        }
        c.surrogate.push_back(mean(s));
        c.objective_p1.push_back(mean(p1));
        c.objective_p2.push_back(mean(p2));
        c.min_sinr_db.push_back(mean(si));
        c.min_scnr_db.push_back(mean(sc));
      }
      std::vector<double> secs;
      for (const auto& o : outs) secs.push_back(o.seconds);
      c.mean_seconds = mean(secs);
      curves.push_back(std::move(c));
    }
  }
  return curves;
}

std::vector<SweepPoint> run_tradeoff(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<SweepPoint> pts;
  for (SolverKind solver : expand(spec.solvers)) {
    for (double delta : deltas_or(spec, default_tradeoff_deltas())) {
      SystemConfig cfg = spec.base;
      cfg.delta = delta;
      const auto outs = run_realizations(cfg, spec.master_seed,
                                         spec.n_realizations, solver, spec.alg1,
                                         spec.fp, spec.threads);
      pts.push_back(aggregate(solver, cfg.n_users, delta, spec.alg1.mu, outs));
    }
  }
  return pts;
}

std::vector<SweepPoint> run_user_sweep(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<SweepPoint> pts;
  for (SolverKind solver : expand(spec.solvers)) {
    for (double delta : deltas_or(spec, {0.0, 1.0})) {
      for (int k : spec.users_list) {
        SystemConfig cfg = spec.base;
        cfg.delta = delta;
        cfg.n_users = k;
        const auto outs = run_realizations(cfg, spec.master_seed,
                                           spec.n_realizations, solver,
                                           spec.alg1, spec.fp, spec.threads);
        pts.push_back(aggregate(solver, k, delta, spec.alg1.mu, outs));
      }
    }
  }
  return pts;
}

std::vector<FairnessRow> run_fairness_table(const ExperimentSpec& spec) {
  spec.validate();
  SystemConfig cfg = spec.base;
  cfg.delta = spec.delta_list.empty() ? 1.0 : spec.delta_list.front();
  std::vector<FairnessRow> rows;
  for (SolverKind solver : expand(spec.solvers)) {
    const auto outs = run_realizations(cfg, spec.master_seed,
                                       spec.n_realizations, solver, spec.alg1,
                                       spec.fp, spec.threads);
    FairnessRow row;
    row.solver = solver;
    row.sinr_db.assign(static_cast<std::size_t>(cfg.n_users), 0.0);
    row.scnr_db.assign(static_cast<std::size_t>(cfg.n_targets), 0.0);
    std::vector<double> mins, mins_s, spreads;
    for (const auto& o : outs) {
      for (int k = 0; k < cfg.n_users; ++k) row.sinr_db[k] += to_db(o.report.sinr(k));
      for (int m = 0; m < cfg.n_targets; ++m) row.scnr_db[m] += to_db(o.report.scnr(m));
      mins.push_back(to_db(o.report.min_sinr));
      mins_s.push_back(to_db(o.report.min_scnr));
      spreads.push_back(o.report.spread_sinr_db);
    }
    const double n = static_cast<double>(outs.size());
    for (double& v : row.sinr_db) v /= n;
    for (double& v : row.scnr_db) v /= n;
    const auto [lo, hi] = std::minmax_element(row.sinr_db.begin(), row.sinr_db.end());
    row.spread_of_means_db = *hi - *lo;
    row.mean_min_sinr_db = mean(mins);
    row.mean_min_scnr_db = mean(mins_s);
    row.mean_realization_spread_db = mean(spreads);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepPoint> run_timing(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<SweepPoint> pts;
  for (SolverKind solver : expand(spec.solvers)) {
    for (double delta : deltas_or(spec, {0.0, 1.0})) {
      for (int k : spec.users_list) {
        SystemConfig cfg = spec.base;
        cfg.delta = delta;
        cfg.n_users = k;
        // Warm-up solve on an unrelated seed, excluded from the average.
        run_realizations(cfg, ~spec.master_seed, 1, solver, spec.alg1, spec.fp, 1);
        const auto outs = run_realizations(cfg, spec.master_seed,
                                           spec.n_realizations, solver,
                                           spec.alg1, spec.fp, 1);
        pts.push_back(aggregate(solver, k, delta, spec.alg1.mu, outs));
      }
    }
  }
  return pts;
}

std::string provenance_line(const ExperimentSpec& spec) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(spec.base)));
  std::ostringstream os;
  os << "# config_hash=" << hash << " seed=" << spec.master_seed
     << " realizations=" << spec.n_realizations
     << " version=isac-bench-" ISAC_VERSION;
  return os.str();
}

namespace {

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& header) : path_(path) {
    out_.open(path);
    if (!out_) throw Error("cannot write " + path.string());
    out_ << header << '\n';
  }
  std::ostream& row() { return out_; }
  void close(const std::string& footer) {
    out_ << footer << '\n';
    out_.close();
    if (!out_) throw Error("write failed: " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

std::string mu_tag(double mu) {
  std::string s = csv_num(mu);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  out.close();
  if (!out) throw Error("cannot write " + path.string());
}

const char* kPlotHeader =
    "import csv, sys\n"
    "import matplotlib\n"
    "matplotlib.use('Agg')\n"
    "import matplotlib.pyplot as plt\n\n"
    "def read(path):\n"
    "    with open(path) as f:\n"
    "        return [r for r in csv.DictReader(l for l in f if not l.startswith('#'))]\n\n";

void write_sweep_csv(const fs::path& path, const std::vector<SweepPoint>& pts,
                     const std::string& footer, bool with_mu) {
  CsvFile f(path, with_mu ? "solver,n_users,delta,mu,min_sinr_db,min_scnr_db"
                          : "solver,n_users,delta,min_sinr_db,min_scnr_db");
  for (const auto& p : pts) {
    f.row() << to_string(p.solver) << ',' << p.n_users << ',' << csv_num(p.delta);
    if (with_mu) f.row() << ',' << (p.solver == SolverKind::kAlg1 ? csv_num(p.mu) : "");
    f.row() << ',' << csv_num(p.mean_min_sinr_db) << ','
            << csv_num(p.mean_min_scnr_db) << '\n';
  }
  f.close(footer);
}

void write_runtime_csv(const fs::path& path, const std::vector<SweepPoint>& pts,
                       const std::string& footer) {
  CsvFile f(path, "solver,n_users,delta,mean_seconds");
  for (const auto& p : pts) {
    f.row() << to_string(p.solver) << ',' << p.n_users << ',' << csv_num(p.delta)
            << ',' << csv_num(p.mean_seconds) << '\n';
  }
  f.close(footer);
}

}  // namespace

std::vector<fs::path> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::error_code ec;
  fs::create_directories(spec.out_dir, ec);
  if (ec) {
    throw Error("cannot create " + spec.out_dir.string() + ": " + ec.message());
  }
  const std::string footer = provenance_line(spec);
  std::vector<fs::path> written;
  auto path = [&](const std::string& name) {
    written.push_back(spec.out_dir / name);
    return written.back();
  };

  switch (spec.kind) {
    case ExperimentKind::kConvergence: {
      const auto curves = run_convergence(spec);
      std::string plot = kPlotHeader;
      plot += "plt.figure()\n";
      std::vector<SweepPoint> runtime;
      for (const auto& c : curves) {
        const std::string name =
            c.solver == SolverKind::kAlg1
                ? "convergence_alg1_mu" + mu_tag(c.mu) + ".csv"
                : "convergence_fp.csv";
        CsvFile f(path(name),
                  "iteration,surrogate,obj_p1,obj_p2,min_sinr_db,min_scnr_db");
        for (std::size_t i = 0; i < c.surrogate.size(); ++i) {
          f.row() << i + 1 << ',' << csv_num(c.surrogate[i]) << ','
                  << csv_num(c.objective_p1[i]) << ','
                  << csv_num(c.objective_p2[i]) << ','
                  << csv_num(c.min_sinr_db[i]) << ','
                  << csv_num(c.min_scnr_db[i]) << '\n';
        }
        f.close(footer);
        plot += "rows = read('" + name + "')\n"
                "plt.plot([int(r['iteration']) for r in rows], "
                "[float(r['obj_p1']) for r in rows], label='" +
                name.substr(12, name.size() - 16) + "')\n";
        runtime.push_back({c.solver, spec.base.n_users, spec.base.delta, c.mu,
                           0.0, 0.0, c.mean_seconds});
      }
      write_runtime_csv(path("convergence_runtime.csv"), runtime, footer);
      plot += "plt.xlabel('iteration'); plt.ylabel('min SINR + delta min SCNR')\n"
              "plt.legend(); plt.savefig('convergence.png', dpi=150)\n";
      write_text(path("plot_convergence.py"), plot);
      break;
    }
    case ExperimentKind::kTradeoff: {
      const auto pts = run_tradeoff(spec);
      write_sweep_csv(path("tradeoff.csv"), pts, footer, false);
      write_text(path("plot_tradeoff.py"),
                 std::string(kPlotHeader) +
                     "rows = read('tradeoff.csv')\nplt.figure()\n"
                     "for s in sorted({r['solver'] for r in rows}):\n"
                     "    rs = [r for r in rows if r['solver'] == s]\n"
                     "    plt.plot([float(r['min_sinr_db']) for r in rs], "
                     "[float(r['min_scnr_db']) for r in rs], 'o-', label=s)\n"
                     "plt.xlabel('min SINR [dB]'); plt.ylabel('min SCNR [dB]')\n"
                     "plt.legend(); plt.savefig('tradeoff.png', dpi=150)\n");
      break;
    }
    case ExperimentKind::kUserSweep: {
      const auto pts = run_user_sweep(spec);
      write_sweep_csv(path("usersweep.csv"), pts, footer, false);
      write_runtime_csv(path("usersweep_runtime.csv"), pts, footer);
      write_text(path("plot_usersweep.py"),
                 std::string(kPlotHeader) +
                     "rows = read('usersweep.csv')\n"
                     "fig, ax = plt.subplots(1, 2, figsize=(10, 4))\n"
                     "for s in sorted({r['solver'] for r in rows}):\n"
                     "    for d in sorted({r['delta'] for r in rows}):\n"
                     "        rs = [r for r in rows if r['solver'] == s and r['delta'] == d]\n"
                     "        k = [int(r['n_users']) for r in rs]\n"
                     "        ax[0].plot(k, [float(r['min_sinr_db']) for r in rs], 'o-', label=f'{s} d={d}')\n"
                     "        ax[1].plot(k, [float(r['min_scnr_db']) for r in rs], 'o-', label=f'{s} d={d}')\n"
                     "ax[0].set_ylabel('min SINR [dB]'); ax[1].set_ylabel('min SCNR [dB]')\n"
                     "for a in ax: a.set_xlabel('K'); a.legend()\n"
                     "fig.savefig('usersweep.png', dpi=150)\n");
      break;
    }
    case ExperimentKind::kFairness: {
      const auto rows = run_fairness_table(spec);
      std::ostringstream header;
      header << "solver";
      for (int k = 1; k <= spec.base.n_users; ++k) header << ",sinr_" << k << "_db";
      for (int m = 1; m <= spec.base.n_targets; ++m) header << ",scnr_" << m << "_db";
      header << ",min_sinr_db,min_scnr_db,spread_of_means_db,mean_spread_db";
      CsvFile f(path("fairness.csv"), header.str());
      for (const auto& r : rows) {
        f.row() << to_string(r.solver);
        for (double v : r.sinr_db) f.row() << ',' << csv_num(v);
        for (double v : r.scnr_db) f.row() << ',' << csv_num(v);
        f.row() << ',' << csv_num(r.mean_min_sinr_db) << ','
                << csv_num(r.mean_min_scnr_db) << ','
                << csv_num(r.spread_of_means_db) << ','
                << csv_num(r.mean_realization_spread_db) << '\n';
      }
      f.close(footer);
      write_text(path("plot_fairness.py"),
                 std::string(kPlotHeader) +
                     "rows = read('fairness.csv')\nplt.figure()\n"
                     "cols = [c for c in rows[0] if c.startswith(('sinr_', 'scnr_'))]\n"
                     "for i, r in enumerate(rows):\n"
                     "    plt.bar([j + 0.4 * i for j in range(len(cols))], "
                     "[float(r[c]) for c in cols], width=0.4, label=r['solver'])\n"
                     "plt.xticks(range(len(cols)), cols, rotation=45)\n"
                     "plt.ylabel('dB'); plt.legend(); plt.tight_layout()\n"
                     "plt.savefig('fairness.png', dpi=150)\n");
      break;
    }
    case ExperimentKind::kTiming: {
      const auto pts = run_timing(spec);
      write_runtime_csv(path("timing.csv"), pts, footer);
      write_text(path("plot_timing.py"),
                 std::string(kPlotHeader) +
                     "rows = read('timing.csv')\nplt.figure()\n"
                     "for s in sorted({r['solver'] for r in rows}):\n"
                     "    for d in sorted({r['delta'] for r in rows}):\n"
                     "        rs = [r for r in rows if r['solver'] == s and r['delta'] == d]\n"
                     "        plt.semilogy([int(r['n_users']) for r in rs], "
                     "[float(r['mean_seconds']) for r in rs], 'o-', label=f'{s} d={d}')\n"
                     "plt.xlabel('K'); plt.ylabel('seconds per solve')\n"
                     "plt.legend(); plt.savefig('timing.png', dpi=150)\n");
      break;
    }
  }
  return written;
}

}  // namespace isac
