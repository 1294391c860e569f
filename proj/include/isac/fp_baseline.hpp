#pragma once

#include "isac/config.hpp"
#include "isac/trace.hpp"

namespace isac {

/// Quadratic-transform auxiliaries: beta_c (K) and beta_s (M x K, row m).
struct BetaState {
  CVector beta_c;
  CMatrix beta_s;
};

struct EpigraphOptions {
  /// Initial step; <= 0 selects 0.1 * sqrt(P_t/L_t) / ||supergradient at start||.
  double step0 = 0.0;
  int iters = 300;
  /// Multiplier in the automatic step0 rule.
  double step_scale = 0.1;
};

struct FpOptions {
  int outer_max = 100;
  /// Stop when the relative change of min SINR + delta * min SCNR is below this.
  double tol = 1e-5;
  EpigraphOptions epigraph;
};

/// Optimal beta at (W, F); the transformed ratios then equal the SINR/SCNR.
BetaState update_beta(const Scene& scene, const Beamformers& bf);

/// Quadratic-transform values q_ck(W) and q_sm(W) at fixed beta and F.
struct TransformedRatios {
  RVector q_c;
  RVector q_s;
};
TransformedRatios transformed_ratios(const Scene& scene, const BetaState& beta,
                                     const CMatrix& f, const CMatrix& w);

/// min_k q_ck + delta * min_m q_sm.
double epigraph_objective(const Scene& scene, const BetaState& beta,
                          const CMatrix& f, const CMatrix& w, double delta);

/// Interference-whitened combiner (sum_{j!=m} G_j W W^H G_j^H + L_r s^2 I)^-1 G_m W beta_sm^H.
CMatrix update_f_fp(const Scene& scene, const Beamformers& bf,
                    const BetaState& beta);

struct EpigraphResult {
  CMatrix w;
  double objective = 0.0;        // best value found
  double start_objective = 0.0;  // value at the warm start
  int iterations = 0;
};

/// Projected supergradient ascent on min_k q_ck + delta min_m q_sm over the
/// per-antenna set, from the feasible warm start w0. Returns the best
/// iterate, so the result is never worse than w0.
EpigraphResult solve_w_epigraph(const Scene& scene, const BetaState& beta,
                                const CMatrix& f, double delta, double p_tx,
                                const CMatrix& w0,
                                const EpigraphOptions& opts = {});

/// Alternating optimization over F, beta and W. Every round refreshes F,
/// re-tightens beta at the new F, then improves W from the previous W.
SolveResult solve_fp(const Scene& scene, const SystemConfig& cfg,
                     const FpOptions& opts = {});

}  // namespace isac
