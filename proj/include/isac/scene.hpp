#pragma once

#include <vector>

#include "isac/config.hpp"
#include "isac/types.hpp"

namespace isac {

/// Normalized half-wavelength ULA response: a[m] = exp(i*pi*m*sin(angle))/sqrt(n).
CVector steering_vector(double angle, int n);

/// Amplitude-domain large-scale gain sqrt(10^(ref_db/10) * distance^-exponent).
double path_loss_amplitude(double ref_db, double distance, double exponent);

/// One point scatterer seen by the monostatic radar.
struct TargetResponse {
  cdouble amplitude;  // path loss times complex gain
  double angle = 0.0;
  bool is_clutter = false;
};

/// One channel realization. Targets come first in `responses`, then clutter.
class Scene {
 public:
  Scene() = default;
  Scene(CMatrix h, std::vector<TargetResponse> responses, int n_targets,
        int n_rx, double sigma2_c, double sigma2_s);

  int n_tx() const { return static_cast<int>(h_.rows()); }
  int n_rx() const { return n_rx_; }
  int n_users() const { return static_cast<int>(h_.cols()); }
  int n_targets() const { return n_targets_; }
  int n_responses() const { return static_cast<int>(responses_.size()); }
  double sigma2_c() const { return sigma2_c_; }
  double sigma2_s() const { return sigma2_s_; }

  /// L_t x K; column k is user k's channel.
  const CMatrix& h() const { return h_; }
  const std::vector<TargetResponse>& responses() const { return responses_; }

  /// Rank-one response G_i = amplitude * a_r(phi) * a_t(phi)^H, L_r x L_t.
  const CMatrix& g(int i) const { return g_[static_cast<std::size_t>(i)]; }
  /// Factors of every G_i: column i of rx_steering() / tx_steering() is
  /// a_r / a_t at response i's angle, amplitudes()(i) its complex gain.
  const CMatrix& rx_steering() const { return a_r_; }
  const CMatrix& tx_steering() const { return a_t_; }
  const CVector& amplitudes() const { return amp_; }

  bool operator==(const Scene& o) const;

 private:
  CMatrix h_;
  std::vector<TargetResponse> responses_;
  std::vector<CMatrix> g_;
  CMatrix a_r_;
  CMatrix a_t_;
  CVector amp_;
  int n_targets_ = 0;
  int n_rx_ = 0;
  double sigma2_c_ = 0.0;
  double sigma2_s_ = 0.0;
};

/// Draws one realization from cfg (using cfg.seed). Distances are clamped
/// below at 1 m.
Scene generate_scene(const SystemConfig& cfg);

}  // namespace isac
