#include "isac/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace isac {

CMatrix hermitian_solve(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    throw InvalidArgument("hermitian_solve: dimension mismatch");
  }
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw DegenerateInput("hermitian_solve: matrix is not positive definite");
  }
  return llt.solve(b);
}

double dominant_eigenvalue(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("dominant_eigenvalue: matrix must be square");
  }
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cdouble(normal(rng), normal(rng));
  v.normalize();

  double lambda = 0.0;
  CVector av = a * v;
  for (int it = 0; it < 500; ++it) {
    const double next = std::real(v.dot(av));
    const double norm = av.norm();
    if (norm == 0.0) break;
    v = av / norm;
    av = a * v;
    const bool done = it > 0 && std::abs(next - lambda) <= 1e-8 * std::abs(next);
    lambda = next;
    if (done) break;
  }
  lambda = std::real(v.dot(av));
  if ((av - lambda * v).norm() > 1e-5 * std::abs(lambda)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
    lambda = es.eigenvalues().maxCoeff();
  }
  return std::max(lambda, 0.0);
}

CMatrix project_per_antenna(const CMatrix& s, double p_tx,
                            ProjectionMode mode) {
  if (!(p_tx > 0.0)) throw InvalidArgument("project_per_antenna: p_tx <= 0");
  const double r = std::sqrt(p_tx / static_cast<double>(s.rows()));
  CMatrix out = s;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double norm = s.row(i).norm();
    switch (mode) {
      case ProjectionMode::kEuclidean:
        if (norm > r) out.row(i) *= r / norm;
        break;
      case ProjectionMode::kBoundary:
        if (norm == 0.0) {
          throw DegenerateInput("project_per_antenna: zero row " +
                                std::to_string(i) + " in boundary mode");
        }
        out.row(i) *= r / norm;
        break;
      case ProjectionMode::kLiteralPrinted:
        if (norm == 0.0) {
          throw DegenerateInput("project_per_antenna: zero row " +
                                std::to_string(i));
        }
        out.row(i) *= r / (norm * norm);
        break;
    }
  }
  return out;
}

Lemma1Sides lemma1_lower_bound(const CMatrix& w, const CMatrix& p,
                               const CMatrix& a) {
  if (w.rows() != p.rows() || w.cols() != p.cols() || a.rows() != w.rows() ||
      a.cols() != w.rows()) {
    throw InvalidArgument("lemma1_lower_bound: dimension mismatch");
  }
  const double lhs = std::real((w * w.adjoint() * a).trace());
  const double rhs = 2.0 * std::real((p * w.adjoint() * a).trace()) -
                     std::real((p * p.adjoint() * a).trace());
  return {lhs, rhs};
}

bool is_hermitian(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= tol * a.norm();
}

}  // namespace isac
