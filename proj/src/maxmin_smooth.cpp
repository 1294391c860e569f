#include "isac/maxmin_smooth.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace isac {

namespace {

RVector uniform(int n) { return RVector::Constant(n, 1.0 / n); }

double comm_denominator(const CMatrix& gains, int k, double sigma2) {
  return gains.row(k).squaredNorm() + sigma2;
}

double sensing_noise(const Scene& scene, const CVector& f) {
  return scene.n_rx() * scene.sigma2_s() * f.squaredNorm();
}

}  // namespace

void SolverOptions::validate() const {
  if (!(mu > 0.0)) throw InvalidArgument("solver: mu must be > 0");
  if (inner_w < 1) throw InvalidArgument("solver: inner_w must be >= 1");
  if (outer_max < 1) throw InvalidArgument("solver: outer_max must be >= 1");
  if (!(tol >= 0.0)) throw InvalidArgument("solver: tol must be >= 0");
  if (mu_warmup && !(mu0 > 0.0)) {
    throw InvalidArgument("solver: mu0 must be > 0");
  }
  if (init == InitPolicy::kProvided && !initial) {
    throw InvalidArgument("solver: provided init without initial point");
  }
}

SurrogateTerms surrogate_terms(const Scene& scene, const Beamformers& bf,
                               const AuxState& aux) {
  const int K = scene.n_users();
  const int M = scene.n_targets();
  SurrogateTerms t{RVector(K), RVector(M)};

  const CMatrix gains = comm_gains(scene, bf.w);
  for (int k = 0; k < K; ++k) {
    const double xi = aux.xi_c(k);
    const cdouble th = aux.theta_c(k);
    t.f_c(k) = std::log1p(xi) +
               2.0 * std::sqrt(1.0 + xi) * std::real(gains(k, k) * std::conj(th)) -
               std::norm(th) * comm_denominator(gains, k, scene.sigma2_c()) - xi;
  }
  for (int m = 0; m < M; ++m) {
    const CVector fm = bf.f.col(m);
    const CMatrix rows = sensing_rows(scene, fm, bf.w);
    const double xi = aux.xi_s(m);
    const CRowVector th = aux.theta_s.row(m);
    const cdouble lin = (rows.row(m) * th.adjoint())(0, 0);
    t.f_s(m) = std::log1p(xi) + 2.0 * std::sqrt(1.0 + xi) * std::real(lin) -
               th.squaredNorm() * (rows.squaredNorm() + sensing_noise(scene, fm)) -
               xi;
  }
  return t;
}

RVector softmin(const RVector& f, double mu) {
  if (!(mu > 0.0)) throw InvalidArgument("softmin: mu must be > 0");
  const double lo = f.minCoeff();
  RVector z = (-mu * (f.array() - lo)).exp().matrix();
  return z / z.sum();
}

std::pair<RVector, RVector> update_z(const RVector& f_c, const RVector& f_s,
                                     double mu) {
  return {softmin(f_c, mu), softmin(f_s, mu)};
}

AuxState update_aux(const Scene& scene, const Beamformers& bf, AuxState aux) {
  const int K = scene.n_users();
  const int M = scene.n_targets();
  if (aux.z_c.size() != K) aux.z_c = uniform(K);
  if (aux.z_s.size() != M) aux.z_s = uniform(M);
  aux.xi_c.resize(K);
  aux.xi_s.resize(M);
  aux.theta_c.resize(K);
  aux.theta_s.resize(M, K);

  const CMatrix gains = comm_gains(scene, bf.w);
  for (int k = 0; k < K; ++k) {
    const double signal = std::norm(gains(k, k));
    double rest = scene.sigma2_c();
    for (int j = 0; j < K; ++j) {
      if (j != k) rest += std::norm(gains(k, j));
    }
    const double total = signal + rest;
    const double xi = signal / rest;
    aux.xi_c(k) = xi;
    aux.theta_c(k) = std::sqrt(1.0 + xi) * gains(k, k) / total;
  }
  for (int m = 0; m < M; ++m) {
    const CVector fm = bf.f.col(m);
    const CMatrix rows = sensing_rows(scene, fm, bf.w);
    const double signal = rows.row(m).squaredNorm();
    double rest = sensing_noise(scene, fm);
    for (int j = 0; j < scene.n_responses(); ++j) {
      if (j != m) rest += rows.row(j).squaredNorm();
    }
    const double total = signal + rest;
    const double xi = signal / rest;
    aux.xi_s(m) = xi;
    aux.theta_s.row(m) = std::sqrt(1.0 + xi) * rows.row(m) / total;
  }
  return aux;
}

CMatrix update_f(const Scene& scene, const Beamformers& bf,
                 const AuxState& aux) {
  const int M = scene.n_targets();
  const CMatrix r = echo_covariance(scene, bf.w);
  const CMatrix tw = scene.tx_steering().adjoint() * bf.w;
  CMatrix rhs(scene.n_rx(), M);
  for (int m = 0; m < M; ++m) {
    const double th2 = aux.theta_s.row(m).squaredNorm();
    if (th2 == 0.0) {
      throw DegenerateInput("update_f: theta_s for target " +
                            std::to_string(m) + " is zero");
    }
    // G_m W theta^H = amp_m a_r,m (a_t,m^H W theta^H)
    const cdouble proj = (tw.row(m) * aux.theta_s.row(m).adjoint())(0, 0);
    rhs.col(m) = (std::sqrt(1.0 + aux.xi_s(m)) / th2 * scene.amplitudes()(m) *
                  proj) *
                 scene.rx_steering().col(m);
  }
  return hermitian_solve(r, rhs);
}

WProblem assemble_w_problem(const Scene& scene, const Beamformers& bf,
                            const AuxState& aux, double delta) {
  const int K = scene.n_users();
  const int Lt = scene.n_tx();
  WProblem p;
  p.sigma1 = (aux.z_c.array() * (1.0 + aux.xi_c.array()).sqrt()).matrix().cast<cdouble>()
                 .cwiseProduct(aux.theta_c);
  p.sigma2 = aux.z_c.cwiseProduct(aux.theta_c.cwiseAbs2());
  p.x = CMatrix::Zero(K, Lt);
  p.y = CMatrix::Zero(Lt, Lt);
  if (delta == 0.0) return p;

  // G_j^H f_m = conj(amp_j) (a_r,j^H f_m) a_t,j, so Y = A_t diag(d) A_t^H with
  // d_j = |amp_j|^2 sum_m wy_m |a_r,j^H f_m|^2.
  const CMatrix& at = scene.tx_steering();
  const CMatrix rf = scene.rx_steering().adjoint() * bf.f;  // R x M
  const RVector gain2 = scene.amplitudes().cwiseAbs2();
  RVector d = RVector::Zero(scene.n_responses());
  for (int m = 0; m < scene.n_targets(); ++m) {
    const CRowVector th = aux.theta_s.row(m);
    const double zs = aux.z_s(m);
    // f_m^H G_m = amp_m conj(a_r,m^H f_m) a_t,m^H
    const cdouble c = delta * zs * std::sqrt(1.0 + aux.xi_s(m)) *
                      scene.amplitudes()(m) * std::conj(rf(m, m));
    p.x.noalias() += c * (th.adjoint() * at.col(m).adjoint());
    d += (delta * zs * th.squaredNorm()) * gain2.cwiseProduct(rf.col(m).cwiseAbs2());
  }
  p.y = at * d.cast<cdouble>().asDiagonal() * at.adjoint();
  return p;
}

namespace {

CMatrix quadratic_matrix(const Scene& scene, const WProblem& prob) {
  const CMatrix& h = scene.h();
  return h * prob.sigma2.cast<cdouble>().asDiagonal() * h.adjoint() + prob.y;
}

CMatrix linear_matrix(const Scene& scene, const WProblem& prob) {
  return prob.x.adjoint() + scene.h() * prob.sigma1.asDiagonal();
}

}  // namespace

double w_objective(const Scene& scene, const WProblem& prob, const CMatrix& w) {
  const CMatrix c = linear_matrix(scene, prob);
  const CMatrix a = quadratic_matrix(scene, prob);
  // 2 Re tr(W C^H) == 2 Re <C, W>
  return 2.0 * std::real(c.conjugate().cwiseProduct(w).sum()) -
         std::real((w.adjoint() * a * w).trace());
}

CMatrix update_w(const Scene& scene, const WProblem& prob, const CMatrix& w,
                 int inner_w, double p_tx, ProjectionMode mode) {
  if (inner_w < 1) throw InvalidArgument("update_w: inner_w must be >= 1");
  const CMatrix c = linear_matrix(scene, prob);
  const CMatrix a = quadratic_matrix(scene, prob);
  const double lambda = dominant_eigenvalue(a);
  CMatrix out = w;
  for (int t = 0; t < inner_w; ++t) {
    CMatrix b = c + lambda * out;
    b.noalias() -= a * out;
    out = project_per_antenna(b, p_tx, mode);
  }
  return out;
}

CMatrix update_w(const Scene& scene, const AuxState& aux, double delta,
                 const Beamformers& bf, int inner_w, double p_tx,
                 ProjectionMode mode) {
  const WProblem prob = assemble_w_problem(scene, bf, aux, delta);
  return update_w(scene, prob, bf.w, inner_w, p_tx, mode);
}

Beamformers matched_init(const Scene& scene, double p_tx) {
  Beamformers bf;
  bf.w = project_per_antenna(scene.h(), p_tx, ProjectionMode::kBoundary);
  bf.f.resize(scene.n_rx(), scene.n_targets());
  for (int m = 0; m < scene.n_targets(); ++m) {
    bf.f.col(m) = steering_vector(scene.responses()[m].angle, scene.n_rx());
  }
  return bf;
}

SolveResult solve(const Scene& scene, const SystemConfig& cfg,
                  const SolverOptions& options) {
  options.validate();
  if (!(cfg.p_tx > 0.0) || !(cfg.delta >= 0.0)) {
    throw InvalidArgument("solve: invalid p_tx or delta");
  }
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const double delta = cfg.delta;

  Beamformers bf = options.init == InitPolicy::kProvided
                       ? *options.initial
                       : matched_init(scene, cfg.p_tx);
  AuxState aux = update_aux(scene, bf);

  SolveResult result;
  result.beamformers = bf;
  RunTrace& trace = result.trace;
  double best = evaluate(scene, bf, delta).objective_p1;
  double previous = std::numeric_limits<double>::quiet_NaN();

  for (int n = 1; n <= options.outer_max; ++n) {
    const double mu =
        options.mu_warmup
            ? std::min(options.mu, options.mu0 * std::pow(1.1, n - 1))
            : options.mu;

    const SurrogateTerms terms = surrogate_terms(scene, bf, aux);
    std::tie(aux.z_c, aux.z_s) = update_z(terms.f_c, terms.f_s, mu);
    aux = update_aux(scene, bf, std::move(aux));
    try {
      bf.f = update_f(scene, bf, aux);
      const WProblem prob = assemble_w_problem(scene, bf, aux, delta);
      bf.w = update_w(scene, prob, bf.w, options.inner_w, cfg.p_tx,
                      options.projection);
    } catch (const DegenerateInput&) {
      // Every weighted user or target has lost its signal; no ascent
      // direction is left.
      trace.degenerate = true;
      break;
    }

    const SurrogateTerms after = surrogate_terms(scene, bf, aux);
    const double surrogate =
        aux.z_c.dot(after.f_c) + delta * aux.z_s.dot(after.f_s);
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    trace.entries.push_back(make_entry(scene, bf, delta, n, surrogate, ms));

    const double p1 = trace.entries.back().objective_p1;
    if (p1 > best) {
      best = p1;
      result.beamformers = bf;
      trace.best_iteration = n;
    }
    if (n > 1 && std::abs(surrogate - previous) <=
                     options.tol * std::max(std::abs(previous), 1e-300)) {
      trace.converged = true;
      break;
    }
    previous = surrogate;
  }
  return result;
}

}  // namespace isac
