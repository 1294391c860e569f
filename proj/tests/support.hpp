#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "isac/config.hpp"
#include "isac/metrics.hpp"
#include "isac/scene.hpp"

namespace isac::testing {

inline CMatrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = cdouble(n(rng), n(rng));
  }
  return m;
}

inline RVector random_real(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  RVector v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

/// Random Hermitian PSD matrix B B^H of the given rank, unit Frobenius norm.
inline CMatrix random_psd(std::mt19937_64& rng, int n, int rank) {
  const CMatrix b = random_matrix(rng, n, rank);
  CMatrix a = b * b.adjoint();
  return a / a.norm();
}

/// Feasible precoder with every row on the per-antenna boundary.
inline CMatrix random_precoder(std::mt19937_64& rng, int lt, int k,
                               double p_tx) {
  CMatrix w = random_matrix(rng, lt, k);
  const double r = std::sqrt(p_tx / lt);
  for (int i = 0; i < lt; ++i) w.row(i) *= r / w.row(i).norm();
  return w;
}

inline Scene scene_for_seed(std::uint64_t seed, SystemConfig cfg = default_config()) {
  cfg.seed = seed;
  return generate_scene(cfg);
}

inline Beamformers random_beamformers(std::mt19937_64& rng, const Scene& s,
                                      double p_tx) {
  return {random_precoder(rng, s.n_tx(), s.n_users(), p_tx),
          random_matrix(rng, s.n_rx(), s.n_targets())};
}

}  // namespace isac::testing
