#include "isac/metrics.hpp"

#include <cmath>
#include <sstream>

#include "isac/csv.hpp"

namespace isac {

namespace {

void check_dims(const Scene& scene, const Beamformers& bf) {
  if (bf.w.rows() != scene.n_tx() || bf.w.cols() != scene.n_users()) {
    throw InvalidArgument("precoder dimensions do not match the scene");
  }
  if (bf.f.rows() != scene.n_rx() || bf.f.cols() != scene.n_targets()) {
    throw InvalidArgument("combiner dimensions do not match the scene");
  }
}

double spread_db(const RVector& v) {
  return to_db(v.maxCoeff()) - to_db(v.minCoeff());
}

}  // namespace

bool per_antenna_feasible(const CMatrix& w, double p_tx, double tol) {
  const double cap = p_tx / static_cast<double>(w.rows());
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (w.row(i).squaredNorm() > cap + tol) return false;
  }
  return true;
}

CMatrix comm_gains(const Scene& scene, const CMatrix& w) {
  return scene.h().adjoint() * w;
}

CMatrix sensing_rows(const Scene& scene, const CVector& f, const CMatrix& w) {
  // f^H G_j W = amp_j (f^H a_r,j) (a_t,j^H W)
  const CVector coef = scene.amplitudes().cwiseProduct(
      (scene.rx_steering().adjoint() * f).conjugate());
  return coef.asDiagonal() * (scene.tx_steering().adjoint() * w);
}

CMatrix echo_covariance(const Scene& scene, const CMatrix& w, int skip) {
  const int n = scene.n_rx();
  RVector power = scene.amplitudes().cwiseAbs2().cwiseProduct(
      (scene.tx_steering().adjoint() * w).rowwise().squaredNorm());
  if (skip >= 0 && skip < power.size()) power(skip) = 0.0;
  const CMatrix& ar = scene.rx_steering();
  CMatrix r = ar * power.cast<cdouble>().asDiagonal() * ar.adjoint();
  r.diagonal().array() += n * scene.sigma2_s();
  return r;
}

double sinr(const Scene& scene, const Beamformers& bf, int k) {
  if (k < 0 || k >= scene.n_users()) {
    throw InvalidArgument("sinr: user index out of range");
  }
  check_dims(scene, bf);
  const CRowVector gains = scene.h().col(k).adjoint() * bf.w;
  const double signal = std::norm(gains(k));
  double interference = 0.0;
  for (Eigen::Index j = 0; j < gains.size(); ++j) {
    if (j != k) interference += std::norm(gains(j));
  }
  return signal / (interference + scene.sigma2_c());
}

double scnr(const Scene& scene, const Beamformers& bf, int m) {
  if (m < 0 || m >= scene.n_targets()) {
    throw InvalidArgument("scnr: target index out of range");
  }
  check_dims(scene, bf);
  const CVector fm = bf.f.col(m);
  const CMatrix rows = sensing_rows(scene, fm, bf.w);
  const double signal = rows.row(m).squaredNorm();
  double clutter = 0.0;
  for (Eigen::Index j = 0; j < rows.rows(); ++j) {
    if (j != m) clutter += rows.row(j).squaredNorm();
  }
  const double noise = scene.n_rx() * scene.sigma2_s() * fm.squaredNorm();
  return signal / (clutter + noise);
}

RVector sinr_all(const Scene& scene, const Beamformers& bf) {
  RVector out(scene.n_users());
  for (int k = 0; k < scene.n_users(); ++k) out(k) = sinr(scene, bf, k);
  return out;
}

RVector scnr_all(const Scene& scene, const Beamformers& bf) {
  RVector out(scene.n_targets());
  for (int m = 0; m < scene.n_targets(); ++m) out(m) = scnr(scene, bf, m);
  return out;
}

MetricsReport evaluate(const Scene& scene, const Beamformers& bf,
                       double delta) {
  MetricsReport r;
  r.sinr = sinr_all(scene, bf);
  r.scnr = scnr_all(scene, bf);
  r.min_sinr = r.sinr.minCoeff();
  r.min_scnr = r.scnr.minCoeff();
  r.objective_p1 = r.min_sinr + delta * r.min_scnr;
  r.objective_p2 = std::log1p(r.min_sinr) + delta * std::log1p(r.min_scnr);
  r.spread_sinr_db = spread_db(r.sinr);
  r.spread_scnr_db = spread_db(r.scnr);
  return r;
}

std::string metrics_csv_header(int n_users, int n_targets) {
  std::ostringstream os;
  for (int k = 1; k <= n_users; ++k) os << "sinr_" << k << ',';
  for (int m = 1; m <= n_targets; ++m) os << "scnr_" << m << ',';
  os << "min_sinr_db,min_scnr_db,obj_p1,obj_p2";
  return os.str();
}

std::string metrics_csv_row(const MetricsReport& r) {
  std::ostringstream os;
  for (double v : r.sinr) os << csv_num(v) << ',';
  for (double v : r.scnr) os << csv_num(v) << ',';
  os << csv_num(to_db(r.min_sinr)) << ',' << csv_num(to_db(r.min_scnr)) << ','
     << csv_num(r.objective_p1) << ',' << csv_num(r.objective_p2);
  return os.str();
}

}  // namespace isac
