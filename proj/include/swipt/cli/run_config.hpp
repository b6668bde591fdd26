#pragma once

// Run configuration in physical units, read from flat "key = value" text.
// Lines starting with '#' are comments. Keys under "derived." are written
// into manifests for reference and ignored when read back.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swipt/alternating.hpp"
#include "swipt/experiments.hpp"
#include "swipt/model.hpp"

namespace swipt::cli {

/// Raised for malformed config text or values; key() names the culprit.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  std::string experiment = "solve";

  int nTx = 4;
  int nStreams = 4;
  int nId = 4;
  int nEh = 4;

  double txPowerDbm = 20.0;
  double noisePsdDbmHz = -100.0;
  double bandwidthHz = 10e6;
  double efficiency = 0.5;
  double pathlossExponent = 3.0;
  double distIdM = 10.0;
  double distEhM = 10.0;

  /// Harvested-energy target in microwatts; unset means targetFraction * E_max.
  std::optional<double> targetEnergyUw;
  double targetFraction = 0.5;

  /// "identity", "channel-eigenvalues" or a comma-separated diagonal.
  std::string weights = "identity";

  std::uint64_t channelSeed = 11;
  std::uint64_t seed = 1;
  int starts = 20;
  int maxIters = 100;
  double tol = 1e-8;

  int gridSize = 20;
  int convergeIters = 10;

  int berChannels = 1000;
  int berChannelsFull = 100000;
  int berSymbols = 1000;
  std::vector<double> berSnrDb = {0, 5, 10, 15, 20, 25, 30};
  std::vector<std::string> berSchemes = {"wmmse-identity", "rate-oracle", "energy-beamformer"};
  std::uint64_t berSeed = 1;
  bool fullScale = false;
};

/// Every recognized key, in manifest order.
const std::vector<std::string>& config_keys();

/// Throws ConfigError for unknown keys or unparsable values.
void set_key(RunConfig& rc, std::string_view key, std::string_view value);
std::string get_key(const RunConfig& rc, std::string_view key);

RunConfig parse_config(std::string_view text, RunConfig base = {});
/// "key=value" override as given to --set.
void apply_override(RunConfig& rc, std::string_view assignment);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

// Unit conversions. "Normalized" power is relative to the receiver noise
// power, which also makes one energy unit equal to one noise power.
double noise_power_dbm(double psdDbmHz, double bandwidthHz);
double dbm_to_normalized(double dbm, double noiseDbm);
double normalized_to_dbm(double normalized, double noiseDbm);
double dbm_to_microwatts(double dbm);
double microwatts_to_dbm(double uw);

struct Derived {
  double noiseDbm = 0.0;
  double noiseUw = 0.0;
  double normalizedPower = 0.0;
  double snrPerAntennaDb = 0.0;
  double pathlossIdDb = 0.0;
};

Derived derive(const RunConfig& rc);

/// Normalized system model (delta = 1 energy scale). targetEnergy is taken
/// from targetEnergyUw when set, otherwise left at 0.
SystemConfig to_system_config(const RunConfig& rc);

/// Converts a delta = 1 normalized energy to the harvested microwatt value.
double energy_to_microwatts(const RunConfig& rc, double normalizedEnergy);
double microwatts_to_energy(const RunConfig& rc, double uw);

alt::WeightSpec weight_spec(const RunConfig& rc);
alt::SolveOptions solve_options(const RunConfig& rc, int workers);
std::vector<exp::Scheme> schemes(const RunConfig& rc);

/// Resolved config as parseable text followed by derived.* lines.
std::string manifest_text(const RunConfig& rc);

}  // namespace swipt::cli
