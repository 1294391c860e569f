#include <cmath>
#include <random>

#include "doctest.h"
#include "isac/linalg.hpp"
#include "support.hpp"

using namespace isac;
using namespace isac::testing;

TEST_SUITE("linalg") {

TEST_CASE("hermitian solve") {
  const CMatrix b = CMatrix::Random(3, 2);
  CHECK((hermitian_solve(CMatrix::Identity(3, 3), b) - b).norm() < 1e-14);
  CHECK((hermitian_solve(2.0 * CMatrix::Identity(3, 3), b) - 0.5 * b).norm() < 1e-14);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = random_psd(rng, 8, 8) + 0.1 * CMatrix::Identity(8, 8);
    const CMatrix rhs = random_matrix(rng, 8, 3);
    const CMatrix x = hermitian_solve(a, rhs);
    CHECK((a * x - rhs).norm() <= 1e-10 * rhs.norm());
  }
  CMatrix indefinite = CMatrix::Identity(2, 2);
  indefinite(1, 1) = -1.0;
  CHECK_THROWS_AS(hermitian_solve(indefinite, CMatrix::Ones(2, 1)), DegenerateInput);
  CHECK_THROWS_AS(hermitian_solve(CMatrix::Zero(2, 2), CMatrix::Ones(2, 1)), DegenerateInput);
}

TEST_CASE("dominant eigenvalue") {
  CHECK(dominant_eigenvalue(CMatrix::Identity(4, 4)) == doctest::Approx(1.0));
  CMatrix a(2, 2);
  a << 2, 1, 1, 2;
  CHECK(dominant_eigenvalue(a) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(dominant_eigenvalue(CMatrix::Zero(3, 3)) == 0.0);

  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const CMatrix m = random_psd(rng, 16, 1 + t);
    const double lam = dominant_eigenvalue(m);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    CHECK(lam == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-6));
    for (int j = 0; j < 10; ++j) {
      const CVector x = random_matrix(rng, 16, 1);
      const double rq = std::real((x.adjoint() * m * x)(0, 0)) / x.squaredNorm();
      CHECK(rq <= lam * (1 + 1e-9));
    }
  }
}

TEST_CASE("dominant eigenvalue with a clustered spectrum") {
  std::mt19937_64 rng(4);
  const CMatrix q = random_matrix(rng, 12, 12).householderQr().householderQ();
  RVector d = RVector::LinSpaced(12, 0.1, 0.5);
  d(11) = 1.0;
  d(10) = 1.0 - 1e-9;
  const CMatrix m = q * d.cast<cdouble>().asDiagonal() * q.adjoint();
  CHECK(dominant_eigenvalue(m) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("per-antenna projection examples") {
  // p = 4, L_t = 4: r = 1
  CMatrix s(4, 2);
  s << 3, 4, 0.3, 0.4, 0, 0.5, 1, 0;
  const CMatrix e = project_per_antenna(s, 4.0, ProjectionMode::kEuclidean);
  CHECK(std::abs(e(0, 0) - cdouble(0.6)) < 1e-15);
  CHECK(std::abs(e(0, 1) - cdouble(0.8)) < 1e-15);
  CHECK((e.row(1) - s.row(1)).norm() < 1e-15);
  CHECK((e.row(3) - s.row(3)).norm() < 1e-15);

  const CMatrix b = project_per_antenna(s, 4.0, ProjectionMode::kBoundary);
  CHECK(std::abs(b(1, 0) - cdouble(0.6)) < 1e-15);
  CHECK(std::abs(b(2, 1) - cdouble(1.0)) < 1e-15);

  // r / ||s||^2: row 0 has norm 5
  const CMatrix l = project_per_antenna(s, 4.0, ProjectionMode::kLiteralPrinted);
  CHECK(std::abs(l(0, 0) - cdouble(3.0 / 25)) < 1e-15);

  CMatrix z = s;
  z.row(2).setZero();
  CHECK_THROWS_AS(project_per_antenna(z, 4.0, ProjectionMode::kBoundary), DegenerateInput);
  CHECK_NOTHROW(project_per_antenna(z, 4.0, ProjectionMode::kEuclidean));
}

TEST_CASE("projection properties") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const CMatrix s = 3.0 * random_matrix(rng, 8, 3);
    const double p = 2.0;
    const double r = std::sqrt(p / 8);
    const CMatrix e = project_per_antenna(s, p, ProjectionMode::kEuclidean);
    const CMatrix b = project_per_antenna(s, p, ProjectionMode::kBoundary);
    CHECK((project_per_antenna(e, p, ProjectionMode::kEuclidean) - e).norm() < 1e-13);
    CHECK((project_per_antenna(b, p, ProjectionMode::kBoundary) - b).norm() < 1e-13);
    for (int i = 0; i < 8; ++i) {
      CHECK(e.row(i).norm() <= r * (1 + 1e-12));
      CHECK(b.row(i).norm() == doctest::Approx(r));
      // same direction as the input row
      CHECK(std::abs((b.row(i) * s.row(i).adjoint())(0, 0)) ==
            doctest::Approx(b.row(i).norm() * s.row(i).norm()));
    }
    // boundary mode maximizes Re tr(W^H S) over the feasible set
    const CMatrix other = random_precoder(rng, 8, 3, p);
    CHECK(std::real((b.adjoint() * s).trace()) >=
          std::real((other.adjoint() * s).trace()) - 1e-12);
    CHECK(per_antenna_feasible(e, p));
    CHECK(per_antenna_feasible(b, p));
  }
}

TEST_CASE("quadratic minorizer") {
  std::mt19937_64 rng(7);
  const CMatrix w = random_matrix(rng, 6, 2);
  const CMatrix a = random_psd(rng, 6, 3);
  const Lemma1Sides eq = lemma1_lower_bound(w, w, a);
  CHECK(eq.lhs == doctest::Approx(eq.rhs));
  const Lemma1Sides zero = lemma1_lower_bound(w, random_matrix(rng, 6, 2),
                                              CMatrix::Zero(6, 6));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  for (int t = 0; t < 100; ++t) {
    const CMatrix x = random_matrix(rng, 6, 2);
    const CMatrix p = random_matrix(rng, 6, 2);
    const CMatrix m = random_psd(rng, 6, 1 + t % 6);
    const Lemma1Sides s = lemma1_lower_bound(x, p, m);
    // the gap is tr((W-P)(W-P)^H A)
    const double gap = std::real(((x - p) * (x - p).adjoint() * m).trace());
    CHECK(s.lhs >= s.rhs - 1e-12);
    CHECK(s.lhs - s.rhs == doctest::Approx(gap).epsilon(1e-9));
  }
}

TEST_CASE("hermitian check") {
  std::mt19937_64 rng(8);
  CHECK(is_hermitian(random_psd(rng, 5, 2)));
  CMatrix a = CMatrix::Identity(3, 3);
  a(0, 1) = cdouble(0.0, 1.0);
  CHECK_FALSE(is_hermitian(a));
  a(1, 0) = cdouble(0.0, -1.0);
  CHECK(is_hermitian(a));
}

}
