#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace isac {

/// Physical and scenario parameters for one ISAC deployment.
///
/// Defaults reproduce the reference setup: 16 transmit / 16 receive
/// antennas, 4 users, 2 targets among 2 clutter sources, -30 dB reference
/// path loss with exponents 3 (users) and 2 (targets), 3 dB Rician factor,
/// -120 dBm noise and a 20 dB link SNR.
struct SystemConfig {
  int n_tx = 16;
  int n_rx = 16;
  int n_users = 4;
  int n_targets = 2;
  int n_clutter = 2;

  double p_tx = 0.0;  // watts; see with_snr()
  double sigma2_c = 1e-15;
  double sigma2_s = 1e-15;
  double delta = 1.0;

  double rician_db = 3.0;
  double pl_ref_db = -30.0;
  double pl_exp_c = 3.0;
  double pl_exp_s = 2.0;
  double dist_c_base = 100.0;
  double dist_c_spread = 20.0;
  double dist_s_base = 10.0;
  double dist_s_spread = 2.0;
  /// Echo attenuation over the round trip (exponent 2 * pl_exp_s, reference
  /// gain applied once) instead of a single one-way path.
  bool sensing_two_way = false;
  double angle_lo = -2.0 * 3.14159265358979323846 / 3.0;
  double angle_hi = 2.0 * 3.14159265358979323846 / 3.0;

  std::uint64_t seed = 1;

  /// Throws InvalidArgument when any invariant is violated.
  void validate() const;

  /// Per-antenna power cap P_t / L_t.
  double per_antenna_power() const { return p_tx / n_tx; }
};

/// How the 20 dB "SNR" of the reference setup is turned into a power budget.
enum class SnrReference {
  /// P_t = snr * sigma2_c / zeta_c(dist_c_base)^2: the SNR a user at the
  /// nominal distance sees through the path loss.
  kReceived,
  /// P_t = snr * sigma2_c, ignoring path loss.
  kTransmit,
};

/// Sets cfg.p_tx from a link SNR in dB.
SystemConfig with_snr(SystemConfig cfg, double snr_db,
                      SnrReference ref = SnrReference::kReceived);

/// The reference setup with p_tx derived from a 20 dB received SNR.
SystemConfig default_config();

/// Loads a config from a JSON object. Missing keys keep their defaults; an
/// "snr_db" key (with optional "snr_reference": "received" | "transmit") is
/// accepted in place of "p_tx". Unknown keys are rejected.
SystemConfig config_from_json(const nlohmann::json& j);
SystemConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const SystemConfig& cfg);

/// FNV-1a hash of the canonical JSON form; used in CSV provenance lines.
std::uint64_t config_hash(const SystemConfig& cfg);

/// Per-realization seed derived from a master seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace isac
