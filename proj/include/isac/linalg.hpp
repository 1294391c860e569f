#pragma once

#include "isac/types.hpp"

namespace isac {

/// Solves A X = B for Hermitian positive definite A (Cholesky).
/// Throws DegenerateInput when the factorization fails.
CMatrix hermitian_solve(const CMatrix& a, const CMatrix& b);

/// Largest eigenvalue of a Hermitian PSD matrix by power iteration.
///
/// Iterates from a fixed pseudo-random start until the Rayleigh quotient
/// changes by less than 1e-8 (relative) or 500 iterations pass. If the final
/// residual ||Av - lambda v|| exceeds 1e-5 * lambda (clustered top spectrum),
/// the value is recomputed with a dense eigensolver. Zero matrix gives 0.
double dominant_eigenvalue(const CMatrix& a);

enum class ProjectionMode {
  /// Row i scaled by min(1, r / ||s_i||): nearest point of the feasible set.
  kEuclidean,
  /// Every row scaled to norm exactly r. Maximizes Re tr(W^H S) over the set.
  kBoundary,
  /// Row i scaled by r / ||s_i||^2, the per-antenna map exactly as it is
  /// sometimes printed. Not feasible in general; kept for A/B comparisons.
  kLiteralPrinted,
};

/// Per-antenna projection with r = sqrt(p_tx / L_t). Boundary mode throws
/// DegenerateInput on a zero row.
CMatrix project_per_antenna(const CMatrix& s, double p_tx,
                            ProjectionMode mode);

struct Lemma1Sides {
  double lhs;  // tr(W W^H A)
  double rhs;  // 2 Re tr(P W^H A) - tr(P P^H A)
};

/// Both sides of the quadratic minorizer tr(WW^H A) >= 2Re tr(PW^H A) - tr(PP^H A).
Lemma1Sides lemma1_lower_bound(const CMatrix& w, const CMatrix& p,
                               const CMatrix& a);

/// ||A - A^H||_F <= tol * ||A||_F.
bool is_hermitian(const CMatrix& a, double tol = 1e-10);

}  // namespace isac
