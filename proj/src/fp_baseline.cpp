#include "isac/fp_baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "isac/linalg.hpp"
#include "isac/maxmin_smooth.hpp"

namespace isac {

BetaState update_beta(const Scene& scene, const Beamformers& bf) {
  const int K = scene.n_users();
  const int M = scene.n_targets();
  BetaState beta{CVector(K), CMatrix(M, K)};
  const CMatrix gains = comm_gains(scene, bf.w);
  for (int k = 0; k < K; ++k) {
    double rest = scene.sigma2_c();
    for (int j = 0; j < K; ++j) {
      if (j != k) rest += std::norm(gains(k, j));
    }
    beta.beta_c(k) = gains(k, k) / rest;
  }
  for (int m = 0; m < M; ++m) {
    const CVector fm = bf.f.col(m);
    const CMatrix rows = sensing_rows(scene, fm, bf.w);
    double rest = scene.n_rx() * scene.sigma2_s() * fm.squaredNorm();
    for (int j = 0; j < scene.n_responses(); ++j) {
      if (j != m) rest += rows.row(j).squaredNorm();
    }
    beta.beta_s.row(m) = rows.row(m) / rest;
  }
  return beta;
}

namespace {

/// Column j of U_m is G_j^H f_m, so row j of U_m^H W is f_m^H G_j W.
std::vector<CMatrix> echo_directions(const Scene& scene, const CMatrix& f) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(scene.n_targets()));
  for (int m = 0; m < scene.n_targets(); ++m) {
    const CVector coef = scene.amplitudes().conjugate().cwiseProduct(
        scene.rx_steering().adjoint() * f.col(m));
    out.push_back(scene.tx_steering() * coef.asDiagonal());
  }
  return out;
}

struct Evaluator {
  const Scene& scene;
  const BetaState& beta;
  std::vector<CMatrix> dirs;
  RVector noise_s;  // L_r sigma_s^2 ||f_m||^2

  Evaluator(const Scene& s, const BetaState& b, const CMatrix& f)
      : scene(s), beta(b), dirs(echo_directions(s, f)) {
    noise_s.resize(s.n_targets());
    for (int m = 0; m < s.n_targets(); ++m) {
      noise_s(m) = s.n_rx() * s.sigma2_s() * f.col(m).squaredNorm();
    }
  }

  struct State {
    CMatrix gains;              // H^H W
    std::vector<CMatrix> rows;  // U_m^H W
    RVector q_c;
    RVector q_s;
  };

  State at(const CMatrix& w) const {
    const int K = scene.n_users();
    const int M = scene.n_targets();
    State st;
    st.gains = comm_gains(scene, w);
    st.q_c.resize(K);
    for (int k = 0; k < K; ++k) {
      double rest = scene.sigma2_c();
      for (int j = 0; j < K; ++j) {
        if (j != k) rest += std::norm(st.gains(k, j));
      }
      const cdouble b = beta.beta_c(k);
      st.q_c(k) = 2.0 * std::real(std::conj(b) * st.gains(k, k)) - std::norm(b) * rest;
    }
    st.q_s.resize(M);
    st.rows.reserve(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
      CMatrix rows = dirs[m].adjoint() * w;
      double rest = noise_s(m);
      for (int j = 0; j < scene.n_responses(); ++j) {
        if (j != m) rest += rows.row(j).squaredNorm();
      }
      const CRowVector b = beta.beta_s.row(m);
      const cdouble lin = (rows.row(m) * b.adjoint())(0, 0);
      st.q_s(m) = 2.0 * std::real(lin) - b.squaredNorm() * rest;
      st.rows.push_back(std::move(rows));
    }
    return st;
  }

  static double objective(const State& st, double delta) {
    return st.q_c.minCoeff() + delta * st.q_s.minCoeff();
  }

  /// d/dW^* of q_{c,k*} + delta * q_{s,m*} at the lowest-index minimizers.
  CMatrix supergradient(const State& st, double delta) const {
    const int K = scene.n_users();
    Eigen::Index kstar = 0;
    st.q_c.minCoeff(&kstar);
    CMatrix g = CMatrix::Zero(scene.n_tx(), K);
    const cdouble b = beta.beta_c(kstar);
    const auto hk = scene.h().col(kstar);
    for (int j = 0; j < K; ++j) {
      if (j == kstar) {
        g.col(j) += b * hk;
      } else {
        g.col(j) -= std::norm(b) * st.gains(kstar, j) * hk;
      }
    }
    if (delta != 0.0) {
      Eigen::Index mstar = 0;
      st.q_s.minCoeff(&mstar);
      const CMatrix& u = dirs[mstar];
      const CMatrix& rows = st.rows[mstar];
      const CRowVector bs = beta.beta_s.row(mstar);
      g += delta * (u.col(mstar) * bs);
      const double b2 = bs.squaredNorm();
      for (int j = 0; j < scene.n_responses(); ++j) {
        if (j == mstar) continue;
        g -= (delta * b2) * (u.col(j) * rows.row(j));
      }
    }
    return g;
  }
};

}  // namespace

TransformedRatios transformed_ratios(const Scene& scene, const BetaState& beta,
                                     const CMatrix& f, const CMatrix& w) {
  const Evaluator ev(scene, beta, f);
  auto st = ev.at(w);
  return {std::move(st.q_c), std::move(st.q_s)};
}

double epigraph_objective(const Scene& scene, const BetaState& beta,
                          const CMatrix& f, const CMatrix& w, double delta) {
  const Evaluator ev(scene, beta, f);
  return Evaluator::objective(ev.at(w), delta);
}

CMatrix update_f_fp(const Scene& scene, const Beamformers& bf,
                    const BetaState& beta) {
  CMatrix f(scene.n_rx(), scene.n_targets());
  for (int m = 0; m < scene.n_targets(); ++m) {
    const CMatrix r = echo_covariance(scene, bf.w, m);
    const CVector rhs = scene.g(m) * bf.w * beta.beta_s.row(m).adjoint();
    f.col(m) = hermitian_solve(r, rhs);
  }
  return f;
}

EpigraphResult solve_w_epigraph(const Scene& scene, const BetaState& beta,
                                const CMatrix& f, double delta, double p_tx,
                                const CMatrix& w0,
                                const EpigraphOptions& opts) {
  if (opts.iters < 1) throw InvalidArgument("epigraph: iters must be >= 1");
  const Evaluator ev(scene, beta, f);
  auto st = ev.at(w0);

  EpigraphResult res;
  res.w = w0;
  res.start_objective = Evaluator::objective(st, delta);
  res.objective = res.start_objective;

  CMatrix w = w0;
  double step0 = opts.step0;
  const int patience = std::max(10, opts.iters / 10);
  int t = 1;
  int stale = 0;
  for (int it = 1; it <= opts.iters; ++it, ++t) {
    // Restart from the best point with half the step once progress stalls.
    if (stale >= patience) {
      w = res.w;
      st = ev.at(w);
      step0 *= 0.5;
      t = 1;
      stale = 0;
    }
    const CMatrix g = ev.supergradient(st, delta);
    if (step0 <= 0.0) {
      const double gn = g.norm();
      if (gn == 0.0) break;
      step0 = opts.step_scale * std::sqrt(p_tx / scene.n_tx()) / gn;
    }
    w = project_per_antenna(w + (step0 / std::sqrt(static_cast<double>(t))) * g,
                            p_tx, ProjectionMode::kEuclidean);
    st = ev.at(w);
    const double value = Evaluator::objective(st, delta);
    res.iterations = it;
    if (value > res.objective) {
      res.objective = value;
      res.w = w;
      stale = 0;
    } else {
      ++stale;
    }
  }
  return res;
}

SolveResult solve_fp(const Scene& scene, const SystemConfig& cfg,
                     const FpOptions& opts) {
  if (opts.outer_max < 1) throw InvalidArgument("fp: outer_max must be >= 1");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const double delta = cfg.delta;

  Beamformers bf = matched_init(scene, cfg.p_tx);
  SolveResult result;
  RunTrace& trace = result.trace;
  double previous = evaluate(scene, bf, delta).objective_p1;

  for (int n = 1; n <= opts.outer_max; ++n) {
    BetaState beta = update_beta(scene, bf);
    bf.f = update_f_fp(scene, bf, beta);
    beta = update_beta(scene, bf);
    bf.w = solve_w_epigraph(scene, beta, bf.f, delta, cfg.p_tx, bf.w,
                            opts.epigraph)
               .w;

    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    TraceEntry e = make_entry(scene, bf, delta, n, 0.0, ms);
    e.surrogate = e.objective_p1;
    trace.entries.push_back(e);
    result.beamformers = bf;
    trace.best_iteration = n;

    const double value = e.objective_p1;
    if (std::abs(value - previous) <=
        opts.tol * std::max(std::abs(previous), 1e-300)) {
      trace.converged = true;
      break;
    }
    previous = value;
  }
  return result;
}

}  // namespace isac
