#include "isac/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace isac {

CVector steering_vector(double angle, int n) {
  if (n < 1) throw InvalidArgument("steering_vector: n must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double phase_step = std::numbers::pi * std::sin(angle);
  CVector a(n);
  for (int m = 0; m < n; ++m) a(m) = std::polar(scale, phase_step * m);
  return a;
}

double path_loss_amplitude(double ref_db, double distance, double exponent) {
  if (!(distance > 0.0)) {
    throw InvalidArgument("path_loss_amplitude: distance must be > 0");
  }
  return std::sqrt(from_db(ref_db) * std::pow(distance, -exponent));
}

Scene::Scene(CMatrix h, std::vector<TargetResponse> responses, int n_targets,
             int n_rx, double sigma2_c, double sigma2_s)
    : h_(std::move(h)),
      responses_(std::move(responses)),
      n_targets_(n_targets),
      n_rx_(n_rx),
      sigma2_c_(sigma2_c),
      sigma2_s_(sigma2_s) {
  if (n_targets_ < 1 || n_targets_ > n_responses()) {
    throw InvalidArgument("Scene: target count out of range");
  }
  const int n = n_responses();
  a_r_.resize(n_rx_, n);
  a_t_.resize(n_tx(), n);
  amp_.resize(n);
  g_.reserve(responses_.size());
  for (int i = 0; i < n; ++i) {
    const auto& r = responses_[static_cast<std::size_t>(i)];
    a_r_.col(i) = steering_vector(r.angle, n_rx_);
    a_t_.col(i) = steering_vector(r.angle, n_tx());
    amp_(i) = r.amplitude;
    g_.push_back(r.amplitude * a_r_.col(i) * a_t_.col(i).adjoint());
  }
}

bool Scene::operator==(const Scene& o) const {
  if (h_.rows() != o.h_.rows() || h_.cols() != o.h_.cols() ||
      responses_.size() != o.responses_.size()) {
    return false;
  }
  if (h_ != o.h_ || n_targets_ != o.n_targets_ || n_rx_ != o.n_rx_ ||
      sigma2_c_ != o.sigma2_c_ || sigma2_s_ != o.sigma2_s_) {
    return false;
  }
  for (std::size_t i = 0; i < responses_.size(); ++i) {
    const auto& a = responses_[i];
    const auto& b = o.responses_[i];
    if (a.amplitude != b.amplitude || a.angle != b.angle ||
        a.is_clutter != b.is_clutter) {
      return false;
    }
  }
  return true;
}

Scene generate_scene(const SystemConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(cfg.angle_lo, cfg.angle_hi);
  // CN(0,1): independent real/imaginary parts of variance 1/2.
  const double half = std::sqrt(0.5);
  auto cn = [&] {
    const double re = normal(rng);
    const double im = normal(rng);
    return cdouble(half * re, half * im);
  };

  const double rf = from_db(cfg.rician_db);
  const double los = std::sqrt(rf / (1.0 + rf));
  const double nlos = std::sqrt(1.0 / (1.0 + rf));

  CMatrix h(cfg.n_tx, cfg.n_users);
  for (int k = 0; k < cfg.n_users; ++k) {
    const double d =
        std::max(1.0, cfg.dist_c_base + cfg.dist_c_spread * normal(rng));
    const double zeta = path_loss_amplitude(cfg.pl_ref_db, d, cfg.pl_exp_c);
    const double phi = angle(rng);
    const cdouble alpha = cn();
    CVector g(cfg.n_tx);
    for (int i = 0; i < cfg.n_tx; ++i) g(i) = cn();
    h.col(k) = zeta * (los * alpha * steering_vector(phi, cfg.n_tx) + nlos * g);
  }

  std::vector<TargetResponse> responses;
  const int total = cfg.n_targets + cfg.n_clutter;
  responses.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    const double d =
        std::max(1.0, cfg.dist_s_base + cfg.dist_s_spread * normal(rng));
    const double exponent = cfg.sensing_two_way ? 2.0 * cfg.pl_exp_s : cfg.pl_exp_s;
    const double zeta = path_loss_amplitude(cfg.pl_ref_db, d, exponent);
    const double phi = angle(rng);
    const cdouble alpha = cn();
    responses.push_back({zeta * alpha, phi, i >= cfg.n_targets});
  }
  return Scene(std::move(h), std::move(responses), cfg.n_targets, cfg.n_rx,
               cfg.sigma2_c, cfg.sigma2_s);
}

}  // namespace isac
