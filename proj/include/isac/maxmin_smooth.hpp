#pragma once

#include <optional>
#include <utility>

#include "isac/config.hpp"
#include "isac/linalg.hpp"
#include "isac/trace.hpp"

namespace isac {

/// Softmin weights and the Lagrangian / quadratic-transform auxiliaries.
struct AuxState {
  RVector z_c;      // K, on the simplex
  RVector z_s;      // M, on the simplex
  RVector xi_c;     // K
  RVector xi_s;     // M
  CVector theta_c;  // K
  CMatrix theta_s;  // M x K, row m is theta_sm
};

enum class InitPolicy {
  /// W0 = boundary projection of H, F0 columns = a_r(target angle).
  kMatched,
  /// Start from SolverOptions::initial.
  kProvided,
};

struct SolverOptions {
  double mu = 10.0;
  int outer_max = 500;
  int inner_w = 5;
  double tol = 1e-5;
  InitPolicy init = InitPolicy::kMatched;
  std::optional<Beamformers> initial;
  /// Geometric warm-up mu_t = min(mu, mu0 * 1.1^t); off means fixed mu.
  bool mu_warmup = false;
  double mu0 = 1.0;
  ProjectionMode projection = ProjectionMode::kBoundary;

  void validate() const;
};

/// f_ck and f_sm evaluated at (W, F, xi, theta).
struct SurrogateTerms {
  RVector f_c;
  RVector f_s;
};

SurrogateTerms surrogate_terms(const Scene& scene, const Beamformers& bf,
                               const AuxState& aux);

/// Numerically stable softmin exp(-mu f_k) / sum_j exp(-mu f_j).
RVector softmin(const RVector& f, double mu);
std::pair<RVector, RVector> update_z(const RVector& f_c, const RVector& f_s,
                                     double mu);

/// Closed-form xi and theta at (W, F); z_c / z_s are kept from `aux` (or set
/// uniform when their sizes do not match the scene).
AuxState update_aux(const Scene& scene, const Beamformers& bf,
                    AuxState aux = {});

/// Closed-form combiner maximizing each f_sm at fixed auxiliaries.
/// Throws DegenerateInput if some theta_sm is zero.
CMatrix update_f(const Scene& scene, const Beamformers& bf,
                 const AuxState& aux);

/// Data of the precoder subproblem
///   max 2 Re tr(W (X + Sigma1^H H^H)) - tr(W W^H (Y + H Sigma2 H^H)).
struct WProblem {
  CVector sigma1;  // diagonal of Sigma1
  RVector sigma2;  // diagonal of Sigma2
  CMatrix x;       // K x L_t
  CMatrix y;       // L_t x L_t, Hermitian PSD
};

WProblem assemble_w_problem(const Scene& scene, const Beamformers& bf,
                            const AuxState& aux, double delta);

/// Value of the precoder subproblem objective at w.
double w_objective(const Scene& scene, const WProblem& prob, const CMatrix& w);

/// Runs `inner_w` minorize-maximize steps on the precoder subproblem starting
/// from w. Each step linearizes around the current point with
/// lambda = dominant eigenvalue of (H Sigma2 H^H + Y) and projects.
CMatrix update_w(const Scene& scene, const WProblem& prob, const CMatrix& w,
                 int inner_w, double p_tx,
                 ProjectionMode mode = ProjectionMode::kBoundary);

/// Convenience overload assembling the subproblem first.
CMatrix update_w(const Scene& scene, const AuxState& aux, double delta,
                 const Beamformers& bf, int inner_w, double p_tx,
                 ProjectionMode mode = ProjectionMode::kBoundary);

/// Initial beamformers for InitPolicy::kMatched.
Beamformers matched_init(const Scene& scene, double p_tx);

/// Smoothed max-min solver. The returned beamformers are the iterate with
/// the best min-SINR + delta * min-SCNR value seen, the starting point
/// included (trace.best_iteration = 0). A degenerate update
/// (see update_f, update_w) ends the run with trace.degenerate set.
SolveResult solve(const Scene& scene, const SystemConfig& cfg,
                  const SolverOptions& options = {});

}  // namespace isac
