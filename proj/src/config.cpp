#include "isac/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "isac/scene.hpp"
#include "isac/types.hpp"

namespace isac {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("invalid config: " + what);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void SystemConfig::validate() const {
  require(n_tx >= 1, "n_tx must be >= 1");
  require(n_rx >= 1, "n_rx must be >= 1");
  require(n_users >= 1, "n_users must be >= 1");
  require(n_targets >= 1, "n_targets must be >= 1");
  require(n_clutter >= 0, "n_clutter must be >= 0");
  require(p_tx > 0.0 && std::isfinite(p_tx), "p_tx must be > 0");
  require(sigma2_c > 0.0 && std::isfinite(sigma2_c), "sigma2_c must be > 0");
  require(sigma2_s > 0.0 && std::isfinite(sigma2_s), "sigma2_s must be > 0");
  require(delta >= 0.0 && std::isfinite(delta), "delta must be >= 0");
  require(std::isfinite(rician_db), "rician_db must be finite");
  require(dist_c_spread >= 0.0 && dist_s_spread >= 0.0,
          "distance spreads must be >= 0");
  require(dist_c_base > 0.0 && dist_s_base > 0.0,
          "base distances must be > 0");
  require(angle_lo < angle_hi, "angle_lo must be < angle_hi");
}

SystemConfig with_snr(SystemConfig cfg, double snr_db, SnrReference ref) {
  double p = from_db(snr_db) * cfg.sigma2_c;
  if (ref == SnrReference::kReceived) {
    const double g = path_loss_amplitude(cfg.pl_ref_db, cfg.dist_c_base,
                                         cfg.pl_exp_c);
    p /= g * g;
  }
  cfg.p_tx = p;
  return cfg;
}

SystemConfig default_config() { return with_snr(SystemConfig{}, 20.0); }

#define ISAC_CONFIG_FIELDS(X)                                              \
  X(n_tx) X(n_rx) X(n_users) X(n_targets) X(n_clutter) X(p_tx) X(sigma2_c) \
  X(sigma2_s) X(delta) X(rician_db) X(pl_ref_db) X(pl_exp_c) X(pl_exp_s)   \
  X(dist_c_base) X(dist_c_spread) X(dist_s_base) X(dist_s_spread) X(sensing_two_way) \
  X(angle_lo) X(angle_hi) X(seed)

namespace {

SystemConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  SystemConfig cfg;
  std::set<std::string> known = {"snr_db", "snr_reference"};
#define X(name)                                         \
  known.insert(#name);                                  \
  if (j.contains(#name)) j.at(#name).get_to(cfg.name);
  ISAC_CONFIG_FIELDS(X)
#undef X
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw InvalidArgument("unknown config key: " + key);
  }
  if (j.contains("snr_db")) {
    if (j.contains("p_tx")) {
      throw InvalidArgument("config sets both p_tx and snr_db");
    }
    SnrReference ref = SnrReference::kReceived;
    if (j.contains("snr_reference")) {
      const auto s = j.at("snr_reference").get<std::string>();
      if (s == "transmit") {
        ref = SnrReference::kTransmit;
      } else if (s != "received") {
        throw InvalidArgument("snr_reference must be received|transmit");
      }
    }
    cfg = with_snr(cfg, j.at("snr_db").get<double>(), ref);
  } else if (!j.contains("p_tx")) {
    cfg = with_snr(cfg, 20.0);
  }
  cfg.validate();
  return cfg;
}

}  // namespace

SystemConfig config_from_json(const nlohmann::json& j) {
  try {
    return parse_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

nlohmann::json config_to_json(const SystemConfig& cfg) {
  nlohmann::json j;
#define X(name) j[#name] = cfg.name;
  ISAC_CONFIG_FIELDS(X)
#undef X
  return j;
}

std::uint64_t config_hash(const SystemConfig& cfg) {
  const std::string s = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace isac
