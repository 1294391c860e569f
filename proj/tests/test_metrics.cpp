#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "isac/metrics.hpp"
#include "support.hpp"

using namespace isac;
using namespace isac::testing;

namespace {

// Explicit sums over antennas, no matrix products.
double sinr_oracle(const Scene& s, const CMatrix& w, int k) {
  double signal = 0, rest = s.sigma2_c();
  for (int j = 0; j < s.n_users(); ++j) {
    cdouble g = 0;
    for (int i = 0; i < s.n_tx(); ++i) g += std::conj(s.h()(i, k)) * w(i, j);
    (j == k ? signal : rest) += std::norm(g);
  }
  return signal / rest;
}

double scnr_oracle(const Scene& s, const Beamformers& bf, int m) {
  double signal = 0, rest = 0;
  for (int r = 0; r < s.n_responses(); ++r) {
    const auto& resp = s.responses()[r];
    const CVector ar = steering_vector(resp.angle, s.n_rx());
    const CVector at = steering_vector(resp.angle, s.n_tx());
    cdouble fa = 0;
    for (int i = 0; i < s.n_rx(); ++i) fa += std::conj(bf.f(i, m)) * ar(i);
    for (int l = 0; l < s.n_users(); ++l) {
      cdouble aw = 0;
      for (int i = 0; i < s.n_tx(); ++i) aw += std::conj(at(i)) * bf.w(i, l);
      (r == m ? signal : rest) += std::norm(resp.amplitude * fa * aw);
    }
  }
  double fn = 0;
  for (int i = 0; i < s.n_rx(); ++i) fn += std::norm(bf.f(i, m));
  return signal / (rest + s.n_rx() * s.sigma2_s() * fn);
}

Scene tiny_scene(CMatrix h, double sigma2_c = 1.0, double amp = 1.0) {
  std::vector<TargetResponse> resp = {{cdouble(amp, 0.0), 0.0, false}};
  return Scene(std::move(h), resp, 1, 1, sigma2_c, 1.0);
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("sinr small examples") {
  // two antennas, two users on orthogonal channels, equal-power precoder
  CMatrix h = CMatrix::Identity(2, 2);
  const Scene s = tiny_scene(h);
  Beamformers bf{CMatrix::Constant(2, 2, cdouble(1.0, 0.0)),
                 CMatrix::Ones(1, 1)};
  // signal 1, interference 1, noise 1
  CHECK(sinr(s, bf, 0) == doctest::Approx(0.5));
  CHECK(sinr(s, bf, 1) == doctest::Approx(0.5));
  bf.w = CMatrix::Identity(2, 2);
  CHECK(sinr(s, bf, 0) == doctest::Approx(1.0));

  CMatrix h1(1, 1);
  h1(0, 0) = cdouble(3.0, 4.0);
  const Scene s1 = tiny_scene(h1, 5.0);
  Beamformers one{CMatrix::Ones(1, 1), CMatrix::Ones(1, 1)};
  CHECK(sinr(s1, one, 0) == doctest::Approx(25.0 / 5.0));
}

TEST_CASE("scalar sensing example") {
  // one antenna each way, unit response, no clutter: |f w|^2 / (|f|^2)
  const Scene s = tiny_scene(CMatrix::Ones(1, 1));
  Beamformers bf{CMatrix::Ones(1, 1), CMatrix::Ones(1, 1)};
  CHECK(scnr(s, bf, 0) == doctest::Approx(1.0));
  bf.w(0, 0) = 3.0;
  CHECK(scnr(s, bf, 0) == doctest::Approx(9.0));
}

TEST_CASE("zero-forcing precoder removes interference") {
  const Scene s = scene_for_seed(4);
  const CMatrix& h = s.h();
  const CMatrix w = h * (h.adjoint() * h).inverse();
  Beamformers bf{w, CMatrix::Ones(s.n_rx(), s.n_targets())};
  const CMatrix g = comm_gains(s, w);
  for (int k = 0; k < s.n_users(); ++k) {
    CHECK(sinr(s, bf, k) == doctest::Approx(1.0 / s.sigma2_c()).epsilon(1e-6));
    for (int j = 0; j < s.n_users(); ++j) {
      if (j != k) CHECK(std::abs(g(k, j)) < 1e-9);
    }
  }
}

TEST_CASE("metrics agree with explicit sums") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SystemConfig cfg = default_config();
    const Scene s = scene_for_seed(seed);
    const Beamformers bf = random_beamformers(rng, s, cfg.p_tx);
    for (int k = 0; k < s.n_users(); ++k) {
      CHECK(sinr(s, bf, k) == doctest::Approx(sinr_oracle(s, bf.w, k)).epsilon(1e-10));
    }
    for (int m = 0; m < s.n_targets(); ++m) {
      CHECK(scnr(s, bf, m) == doctest::Approx(scnr_oracle(s, bf, m)).epsilon(1e-10));
    }
  }
}

TEST_CASE("echo covariance matches its definition") {
  std::mt19937_64 rng(8);
  const Scene s = scene_for_seed(2);
  const CMatrix w = random_precoder(rng, s.n_tx(), s.n_users(), default_config().p_tx);
  for (int skip : {-1, 0, 3}) {
    CMatrix r = s.n_rx() * s.sigma2_s() * CMatrix::Identity(s.n_rx(), s.n_rx());
    for (int j = 0; j < s.n_responses(); ++j) {
      if (j != skip) r += s.g(j) * w * w.adjoint() * s.g(j).adjoint();
    }
    CHECK((echo_covariance(s, w, skip) - r).norm() <= 1e-10 * r.norm());
  }
}

TEST_CASE("invariances") {
  std::mt19937_64 rng(9);
  const double p = default_config().p_tx;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scene s = scene_for_seed(seed);
    Beamformers bf = random_beamformers(rng, s, p);
    const RVector c0 = sinr_all(s, bf);
    const RVector s0 = scnr_all(s, bf);

    Beamformers scaled = bf;
    scaled.f *= cdouble(-3.7, 2.0);
    CHECK((scnr_all(s, scaled) - s0).norm() <= 1e-10 * s0.norm());

    Beamformers rotated = bf;
    for (int k = 0; k < s.n_users(); ++k) {
      rotated.w.col(k) *= std::polar(1.0, 0.3 * (k + 1));
    }
    CHECK((sinr_all(s, rotated) - c0).norm() <= 1e-10 * c0.norm());
    CHECK((scnr_all(s, rotated) - s0).norm() <= 1e-10 * s0.norm());

    // gamma / (1 + gamma) = |signal|^2 / (total received power)
    const CMatrix g = comm_gains(s, bf.w);
    for (int k = 0; k < s.n_users(); ++k) {
      const double total = g.row(k).squaredNorm() + s.sigma2_c();
      CHECK(c0(k) / (1 + c0(k)) == doctest::Approx(std::norm(g(k, k)) / total));
    }
  }
}

TEST_CASE("evaluate objectives") {
  RVector a(2), b(1);
  a << 1.0, 3.0;
  b << 4.0;
  // an instance whose SINRs and SCNR are known exactly
  const Scene s = tiny_scene(CMatrix::Identity(2, 2), 1.0, std::sqrt(2.0));
  Beamformers bf{CMatrix::Zero(2, 2), CMatrix::Ones(1, 1)};
  bf.w(0, 0) = 1.0;
  bf.w(1, 1) = std::sqrt(3.0);
  // a_t = (1, 1) / sqrt(2), gain sqrt(2): echo power 1 + 3 over noise 1
  const MetricsReport r = evaluate(s, bf, 1.0);
  CHECK(r.sinr(0) == doctest::Approx(a(0)));
  CHECK(r.sinr(1) == doctest::Approx(a(1)));
  CHECK(r.scnr(0) == doctest::Approx(b(0)));
  CHECK(r.objective_p1 == doctest::Approx(5.0));
  CHECK(r.objective_p2 == doctest::Approx(std::log(2.0) + std::log(5.0)));
  CHECK(r.spread_sinr_db == doctest::Approx(10 * std::log10(3.0)));
  const MetricsReport r0 = evaluate(s, bf, 0.0);
  CHECK(r0.objective_p1 == doctest::Approx(1.0));

  bf.w.setZero();
  const MetricsReport z = evaluate(s, bf, 1.0);
  CHECK(z.min_sinr == 0.0);
  CHECK(z.min_scnr == 0.0);
  CHECK(z.objective_p1 == 0.0);
}

TEST_CASE("csv helpers") {
  CHECK(metrics_csv_header(2, 1) ==
        "sinr_1,sinr_2,scnr_1,min_sinr_db,min_scnr_db,obj_p1,obj_p2");
  const Scene s = tiny_scene(CMatrix::Identity(2, 2));
  const Beamformers bf{CMatrix::Identity(2, 2), CMatrix::Ones(1, 1)};
  const std::string row = metrics_csv_row(evaluate(s, bf, 1.0));
  CHECK(std::count(row.begin(), row.end(), ',') == 6);
}

TEST_CASE("feasibility and argument checks") {
  CMatrix w = CMatrix::Constant(4, 2, cdouble(0.5, 0.0));
  CHECK(per_antenna_feasible(w, 2.0));  // row power 0.5 = 2 / 4
  w(1, 0) = 0.6;
  CHECK_FALSE(per_antenna_feasible(w, 2.0));

  const Scene s = tiny_scene(CMatrix::Identity(2, 2));
  const Beamformers bf{CMatrix::Identity(2, 2), CMatrix::Ones(1, 1)};
  CHECK_THROWS_AS(sinr(s, bf, 2), InvalidArgument);
  CHECK_THROWS_AS(sinr(s, bf, -1), InvalidArgument);
  CHECK_THROWS_AS(scnr(s, bf, 1), InvalidArgument);
  const Beamformers wrong{CMatrix::Identity(3, 2), CMatrix::Ones(1, 1)};
  CHECK_THROWS_AS(sinr(s, wrong, 0), InvalidArgument);
}

}
