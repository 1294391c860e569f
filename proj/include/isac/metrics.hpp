#pragma once

#include <iosfwd>
#include <string>

#include "isac/scene.hpp"

namespace isac {

/// Transmit precoder W (L_t x K) and radar receive combiner F (L_r x M).
struct Beamformers {
  CMatrix w;
  CMatrix f;
};

/// True when every row of w has power <= p_tx / L_t + tol.
bool per_antenna_feasible(const CMatrix& w, double p_tx, double tol = 1e-9);

/// (H^H W)(k, j) = h_k^H w_j.
CMatrix comm_gains(const Scene& scene, const CMatrix& w);

/// Row j holds f^H G_j W for every response j (targets then clutter).
CMatrix sensing_rows(const Scene& scene, const CVector& f, const CMatrix& w);

/// sum_{j != skip} G_j W W^H G_j^H + L_r sigma_s^2 I (skip < 0 keeps all).
CMatrix echo_covariance(const Scene& scene, const CMatrix& w, int skip = -1);

double sinr(const Scene& scene, const Beamformers& bf, int k);
double scnr(const Scene& scene, const Beamformers& bf, int m);
RVector sinr_all(const Scene& scene, const Beamformers& bf);
RVector scnr_all(const Scene& scene, const Beamformers& bf);

struct MetricsReport {
  RVector sinr;  // linear
  RVector scnr;  // linear
  double min_sinr = 0.0;
  double min_scnr = 0.0;
  double objective_p1 = 0.0;  // min SINR + delta * min SCNR
  double objective_p2 = 0.0;  // min log(1+SINR) + delta * min log(1+SCNR)
  double spread_sinr_db = 0.0;
  double spread_scnr_db = 0.0;
};

MetricsReport evaluate(const Scene& scene, const Beamformers& bf, double delta);

/// sinr_1..K,scnr_1..M,min_sinr_db,min_scnr_db,obj_p1,obj_p2
std::string metrics_csv_header(int n_users, int n_targets);
std::string metrics_csv_row(const MetricsReport& r);

}  // namespace isac
