#include "swipt/cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace swipt::cli {

ConfigError::ConfigError(std::string key, const std::string& what)
    : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key)) {}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (!s.empty()) {
    const auto p = s.find(',');
    out.push_back(trim(s.substr(0, p)));
    if (p == std::string_view::npos) break;
    s.remove_prefix(p + 1);
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double x = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(v) + "'");
  }
  return x;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
  v = trim(v);
  Int x{};
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(v) + "'");
  }
  return x;
}

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(std::string(key), "expected true or false");
}

void positive(std::string_view key, double x) {
  if (!(x > 0.0)) throw ConfigError(std::string(key), "must be positive");
}

struct KeyDef {
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
KeyDef int_key(std::string name, T RunConfig::*field, T minimum) {
  return {name,
          [name, field, minimum](RunConfig& rc, std::string_view v) {
            const T x = to_int<T>(name, v);
            if (x < minimum) {
              throw ConfigError(name, "must be >= " + std::to_string(minimum));
            }
            rc.*field = x;
          },
          [field](const RunConfig& rc) { return std::to_string(rc.*field); }};
}

KeyDef real_key(std::string name, double RunConfig::*field, bool mustBePositive) {
  return {name,
          [name, field, mustBePositive](RunConfig& rc, std::string_view v) {
            const double x = to_double(name, v);
            if (mustBePositive) positive(name, x);
            rc.*field = x;
          },
          [field](const RunConfig& rc) { return format_double(rc.*field); }};
}

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> t;
    t.push_back({"experiment",
                 [](RunConfig& rc, std::string_view v) {
                   v = trim(v);
                   if (v != "solve" && v != "region-mse" && v != "region-rate" &&
                       v != "converge" && v != "ber") {
                     throw ConfigError("experiment", "unknown experiment '" + std::string(v) + "'");
                   }
                   rc.experiment = std::string(v);
                 },
                 [](const RunConfig& rc) { return rc.experiment; }});
    t.push_back(int_key("n_tx", &RunConfig::nTx, 1));
    t.push_back(int_key("n_streams", &RunConfig::nStreams, 1));
    t.push_back(int_key("n_id", &RunConfig::nId, 1));
    t.push_back(int_key("n_eh", &RunConfig::nEh, 1));
    t.push_back(real_key("tx_power_dbm", &RunConfig::txPowerDbm, false));
    t.push_back(real_key("noise_psd_dbm_hz", &RunConfig::noisePsdDbmHz, false));
    t.push_back(real_key("bandwidth_hz", &RunConfig::bandwidthHz, true));
    t.push_back({"efficiency",
                 [](RunConfig& rc, std::string_view v) {
                   const double x = to_double("efficiency", v);
                   if (!(x > 0.0 && x <= 1.0)) throw ConfigError("efficiency", "must lie in (0, 1]");
                   rc.efficiency = x;
                 },
                 [](const RunConfig& rc) { return format_double(rc.efficiency); }});
    t.push_back(real_key("pathloss_exponent", &RunConfig::pathlossExponent, false));
    t.push_back(real_key("dist_id_m", &RunConfig::distIdM, true));
    t.push_back(real_key("dist_eh_m", &RunConfig::distEhM, true));
    t.push_back({"target_energy_uW",
                 [](RunConfig& rc, std::string_view v) {
                   v = trim(v);
                   if (v.empty()) {
                     rc.targetEnergyUw.reset();
                     return;
                   }
                   const double x = to_double("target_energy_uW", v);
                   if (x < 0.0) throw ConfigError("target_energy_uW", "must be nonnegative");
                   rc.targetEnergyUw = x;
                 },
                 [](const RunConfig& rc) {
                   return rc.targetEnergyUw ? format_double(*rc.targetEnergyUw) : std::string();
                 }});
    t.push_back({"target_fraction",
                 [](RunConfig& rc, std::string_view v) {
                   const double x = to_double("target_fraction", v);
                   if (!(x >= 0.0 && x <= 1.0)) {
                     throw ConfigError("target_fraction", "must lie in [0, 1]");
                   }
                   rc.targetFraction = x;
                 },
                 [](const RunConfig& rc) { return format_double(rc.targetFraction); }});
    t.push_back({"weights",
                 [](RunConfig& rc, std::string_view v) {
                   v = trim(v);
                   if (v != "identity" && v != "channel-eigenvalues") {
                     for (auto item : split_list(v)) {
                       if (to_double("weights", item) < 0.0) {
                         throw ConfigError("weights", "weights must be nonnegative");
                       }
                     }
                   }
                   rc.weights = std::string(v);
                 },
                 [](const RunConfig& rc) { return rc.weights; }});
    t.push_back(int_key<std::uint64_t>("channel_seed", &RunConfig::channelSeed, 0));
    t.push_back(int_key<std::uint64_t>("seed", &RunConfig::seed, 0));
    t.push_back(int_key("starts", &RunConfig::starts, 1));
    t.push_back(int_key("max_iters", &RunConfig::maxIters, 1));
    t.push_back({"tol",
                 [](RunConfig& rc, std::string_view v) {
                   const double x = to_double("tol", v);
                   if (x < 0.0) throw ConfigError("tol", "must be nonnegative");
                   rc.tol = x;
                 },
                 [](const RunConfig& rc) { return format_double(rc.tol); }});
    t.push_back(int_key("grid_size", &RunConfig::gridSize, 2));
    t.push_back(int_key("converge_iters", &RunConfig::convergeIters, 1));
    t.push_back(int_key("ber_channels", &RunConfig::berChannels, 1));
    t.push_back(int_key("ber_channels_full", &RunConfig::berChannelsFull, 1));
    t.push_back(int_key("ber_symbols", &RunConfig::berSymbols, 1));
    t.push_back({"ber_snr_db",
                 [](RunConfig& rc, std::string_view v) {
                   std::vector<double> grid;
                   for (auto item : split_list(trim(v))) grid.push_back(to_double("ber_snr_db", item));
                   if (grid.empty()) throw ConfigError("ber_snr_db", "empty grid");
                   for (std::size_t i = 1; i < grid.size(); ++i) {
                     if (grid[i] <= grid[i - 1]) {
                       throw ConfigError("ber_snr_db", "grid must be strictly increasing");
                     }
                   }
                   rc.berSnrDb = std::move(grid);
                 },
                 [](const RunConfig& rc) {
                   std::string s;
                   for (std::size_t i = 0; i < rc.berSnrDb.size(); ++i) {
                     if (i) s += ',';
                     s += format_double(rc.berSnrDb[i]);
                   }
                   return s;
                 }});
    t.push_back({"ber_schemes",
                 [](RunConfig& rc, std::string_view v) {
                   std::vector<std::string> names;
                   for (auto item : split_list(trim(v))) {
                     try {
                       exp::parse_scheme(item);
                     } catch (const Error&) {
                       throw ConfigError("ber_schemes", "unknown scheme '" + std::string(item) + "'");
                     }
                     names.emplace_back(item);
                   }
                   if (names.empty()) throw ConfigError("ber_schemes", "no schemes given");
                   rc.berSchemes = std::move(names);
                 },
                 [](const RunConfig& rc) {
                   std::string s;
                   for (std::size_t i = 0; i < rc.berSchemes.size(); ++i) {
                     if (i) s += ',';
                     s += rc.berSchemes[i];
                   }
                   return s;
                 }});
    t.push_back(int_key<std::uint64_t>("ber_seed", &RunConfig::berSeed, 0));
    t.push_back({"full_scale",
                 [](RunConfig& rc, std::string_view v) { rc.fullScale = to_bool("full_scale", v); },
                 [](const RunConfig& rc) { return std::string(rc.fullScale ? "true" : "false"); }});
    return t;
  }();
  return table;
}

const KeyDef& find_key(std::string_view key) {
  for (const auto& k : key_table()) {
    if (k.name == key) return k;
  }
  throw ConfigError(std::string(key), "unknown key");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& k : key_table()) out.push_back(k.name);
    return out;
  }();
  return keys;
}

void set_key(RunConfig& rc, std::string_view key, std::string_view value) {
  find_key(trim(key)).set(rc, value);
}

std::string get_key(const RunConfig& rc, std::string_view key) { return find_key(key).get(rc); }

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t lineNo = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++lineNo;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), "line " + std::to_string(lineNo) + " has no '='");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.starts_with("derived.")) continue;
    set_key(base, key, line.substr(eq + 1));
  }
  return base;
}

void apply_override(RunConfig& rc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(assignment), "override must look like key=value");
  }
  set_key(rc, assignment.substr(0, eq), assignment.substr(eq + 1));
}

double noise_power_dbm(double psdDbmHz, double bandwidthHz) {
  return psdDbmHz + 10.0 * std::log10(bandwidthHz);
}
double dbm_to_normalized(double dbm, double noiseDbm) {
  return std::pow(10.0, (dbm - noiseDbm) / 10.0);
}
double normalized_to_dbm(double normalized, double noiseDbm) {
  return 10.0 * std::log10(normalized) + noiseDbm;
}
double dbm_to_microwatts(double dbm) { return std::pow(10.0, (dbm + 30.0) / 10.0); }
double microwatts_to_dbm(double uw) { return 10.0 * std::log10(uw) - 30.0; }

Derived derive(const RunConfig& rc) {
  Derived d;
  d.noiseDbm = noise_power_dbm(rc.noisePsdDbmHz, rc.bandwidthHz);
  d.noiseUw = dbm_to_microwatts(d.noiseDbm);
  d.normalizedPower = dbm_to_normalized(rc.txPowerDbm, d.noiseDbm);
  d.pathlossIdDb = 10.0 * rc.pathlossExponent * std::log10(rc.distIdM);
  d.snrPerAntennaDb =
      snr_budget_db(rc.noisePsdDbmHz, rc.bandwidthHz, rc.txPowerDbm, d.pathlossIdDb);
  return d;
}

double energy_to_microwatts(const RunConfig& rc, double normalizedEnergy) {
  return rc.efficiency * normalizedEnergy * derive(rc).noiseUw;
}

double microwatts_to_energy(const RunConfig& rc, double uw) {
  return uw / (rc.efficiency * derive(rc).noiseUw);
}

SystemConfig to_system_config(const RunConfig& rc) {
  SystemConfig cfg;
  cfg.nTx = rc.nTx;
  cfg.nStreams = rc.nStreams;
  cfg.nId = rc.nId;
  cfg.nEh = rc.nEh;
  cfg.powerBudget = derive(rc).normalizedPower;
  cfg.efficiency = rc.efficiency;
  cfg.weights = RVector::Ones(rc.nStreams);
  cfg.targetEnergy = rc.targetEnergyUw ? microwatts_to_energy(rc, *rc.targetEnergyUw) : 0.0;
  return cfg;
}

alt::WeightSpec weight_spec(const RunConfig& rc) {
  if (rc.weights == "identity") return {alt::WeightMode::Identity, {}};
  if (rc.weights == "channel-eigenvalues") return {alt::WeightMode::ChannelEigenvalues, {}};
  const auto items = split_list(rc.weights);
  if (static_cast<int>(items.size()) != rc.nStreams) {
    throw ConfigError("weights", "expected " + std::to_string(rc.nStreams) + " entries");
  }
  RVector w(rc.nStreams);
  for (int k = 0; k < rc.nStreams; ++k) w(k) = to_double("weights", items[k]);
  return {alt::WeightMode::Explicit, w};
}

alt::SolveOptions solve_options(const RunConfig& rc, int workers) {
  alt::SolveOptions o;
  o.starts = rc.starts;
  o.maxIters = rc.maxIters;
  o.tol = rc.tol;
  o.seed = rc.seed;
  o.workers = workers;
  return o;
}

std::vector<exp::Scheme> schemes(const RunConfig& rc) {
  std::vector<exp::Scheme> out;
  for (const auto& s : rc.berSchemes) out.push_back(exp::parse_scheme(s));
  return out;
}

std::string manifest_text(const RunConfig& rc) {
  std::ostringstream os;
  for (const auto& k : key_table()) os << k.name << " = " << k.get(rc) << '\n';
  const Derived d = derive(rc);
  os << "derived.noise_power_dbm = " << format_double(d.noiseDbm) << '\n';
  os << "derived.noise_power_uW = " << format_double(d.noiseUw) << '\n';
  os << "derived.normalized_power = " << format_double(d.normalizedPower) << '\n';
  os << "derived.pathloss_id_db = " << format_double(d.pathlossIdDb) << '\n';
  os << "derived.snr_per_antenna_db = " << format_double(d.snrPerAntennaDb) << '\n';
  return os.str();
}

}  // namespace swipt::cli
