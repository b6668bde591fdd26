#pragma once

// Tradeoff-region sweeps, convergence traces and uncoded 4QAM BER
// Monte-Carlo runs built on the solver modules.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "swipt/alternating.hpp"
#include "swipt/errors.hpp"
#include "swipt/model.hpp"

namespace swipt::exp {

enum class MetricKind { Mse, Rate };

struct RegionPoint {
  double targetEnergy = 0.0;
  double metric = 0.0;
  double achievedEnergy = 0.0;
};

struct RegionCurve {
  MetricKind kind = MetricKind::Mse;
  std::vector<RegionPoint> points;
  SystemConfig config;  // with the weights actually used
  std::uint64_t seed = 0;
};

/// Raised when one grid point fails; carries the points finished before it.
class SweepAborted : public Error {
 public:
  SweepAborted(const Error& cause, RegionCurve partial);
  const RegionCurve& partial() const { return partial_; }
  ErrorCode cause() const { return code(); }

 private:
  RegionCurve partial_;
};

/// Boundary of the MSE-energy (W = I) or rate-energy (W = Lambda_H) region:
/// gridSize targets uniformly on [E_ID, E_max (1 - eps_feas)] followed by the
/// closed-form endpoint (E_max, metric of F_EH). Each grid point is an
/// independent solve seeded by derive_seed(opt.seed, index) and warm-started
/// from the unconstrained WMMSE precoder.
RegionCurve sweep_region(const SystemConfig& cfg, const ChannelPair& ch, MetricKind kind,
                         int gridSize, const alt::SolveOptions& opt);

struct TraceRow {
  int start = 0;
  int iter = 0;
  double mse = 0.0;
  double rateBits = 0.0;
};

struct ConvergenceTable {
  std::vector<TraceRow> rows;  // every start, every iteration
  int bestStart = 0;
  std::vector<TraceRow> best() const;
};

/// Runs exactly `iters` alternating iterations for each of `starts` starts.
ConvergenceTable convergence_trace(const SystemConfig& cfg, const ChannelPair& ch,
                                   const alt::WeightSpec& weights, int starts, int iters,
                                   std::uint64_t seed, int workers = 1);

enum class Scheme { WmmseIdentity, RateOracle, EnergyBeamformer };

std::string_view to_string(Scheme s);
/// Throws Error{InvalidArgument} for unknown names.
Scheme parse_scheme(std::string_view name);

struct BerOptions {
  double distId = 10.0;
  double distEh = 10.0;
  double pathlossExponent = 3.0;
  /// E_bar = targetFraction * E_max in every realization.
  double targetFraction = 0.5;
  alt::SolveOptions solve;  // for the WMMSE scheme; workers is ignored here
  int workers = 1;
};

struct BerResult {
  std::vector<double> snrGridDb;
  std::vector<Scheme> schemes;
  /// errors[s][k], bits[s][k] for scheme s at grid point k.
  std::vector<std::vector<std::uint64_t>> bitErrors;
  std::vector<std::vector<std::uint64_t>> bitsTotal;
  int channelsUsed = 0;
  std::uint64_t bitsPerChannel = 0;

  double ber(std::size_t scheme, std::size_t k) const;
  std::size_t index_of(Scheme s) const;
};

/// Per realization: fresh (H, G), E_bar = targetFraction * E_max, each
/// scheme's precoder, Gray 4QAM through x_hat = L (H F x + n) with the
/// Wiener receiver, per-stream sign slicing of x_hat / gamma. The grid is in
/// per-antenna receive SNR; P_T = 10^(snr/10) d_h^exponent.
BerResult ber_montecarlo(const SystemConfig& cfg, const std::vector<Scheme>& schemes,
                         int nChannels, int symbolsPerChannel, const std::vector<double>& snrGridDb,
                         std::uint64_t seed, const BerOptions& opt = {});

/// SNR advantage of scheme `a` over scheme `b` at the given BER level,
/// by log-BER linear interpolation on the grid. NaN if a curve never
/// crosses the level.
double snr_gain_db(const BerResult& r, Scheme a, Scheme b, double berLevel);

/// Gray 4QAM symbol for bits (b0 on the real rail, b1 on the imaginary
/// rail): ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2).
Complex qpsk_symbol(unsigned b0, unsigned b1);

}  // namespace swipt::exp
