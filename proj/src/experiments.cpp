#include "swipt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>

#include "swipt/baselines.hpp"
#include "swipt/kernels/kernels.hpp"
#include "swipt/kkt_precoder.hpp"
#include "swipt/parallel.hpp"
#include "swipt/rng.hpp"
#include "swipt/wiener.hpp"

namespace swipt::exp {

SweepAborted::SweepAborted(const Error& cause, RegionCurve partial)
    : Error(cause.code(), std::string("region sweep aborted after ") +
                              std::to_string(partial.points.size()) + " points (" + cause.what() +
                              ")"),
      partial_(std::move(partial)) {}

namespace {


double metric_of(MetricKind kind, const SystemConfig& cfg, const CMatrix& H, const CMatrix& F) {
  const auto mr = mmse_and_rate(cfg, H, F);
  return kind == MetricKind::Mse ? mr.mse : mr.rateBits;
}

}  // namespace

RegionCurve sweep_region(const SystemConfig& cfgIn, const ChannelPair& ch, MetricKind kind,
                         int gridSize, const alt::SolveOptions& opt) {
  require(gridSize >= 2, ErrorCode::InvalidArgument, "gridSize must be >= 2");
  SystemConfig cfg = cfgIn;
  const alt::WeightSpec spec{kind == MetricKind::Mse ? alt::WeightMode::Identity
                                                     : alt::WeightMode::ChannelEigenvalues,
                             {}};
  cfg.weights = alt::resolve_weights(cfg.nStreams, ch.H, spec);
  cfg.targetEnergy = 0.0;
  cfg.validate();
  check_channel_dims(cfg, ch.H, ch.G);

  RegionCurve curve;
  curve.kind = kind;
  curve.config = cfg;
  curve.seed = opt.seed;

  const auto id = baselines::unconstrained_wmmse(cfg, ch, opt);
  const double emax = max_energy(cfg, ch.G);
  const double hi = emax * (1.0 - kkt::kFeasibilityMargin);
  const double lo = std::min(id.eID, hi);

  std::vector<RegionPoint> points(gridSize);
  std::vector<int> failed(gridSize, 0);
  std::vector<std::optional<Error>> errors(gridSize);
  parallel_for(gridSize, opt.workers, [&](std::size_t k) {
    const double t = static_cast<double>(k) / (gridSize - 1);
    SystemConfig pc = cfg;
    pc.targetEnergy = k + 1 == static_cast<std::size_t>(gridSize) ? hi : lo + t * (hi - lo);
    alt::SolveOptions o = opt;
    o.workers = 1;
    o.seed = derive_seed(opt.seed, k);
    o.warmStart = id.F;
    try {
      const auto rep = alt::solve(pc, ch, o);
      points[k] = {pc.targetEnergy, metric_of(kind, cfg, ch.H, rep.best.precoder), rep.energy};
    } catch (const Error& e) {
      failed[k] = 1;
      errors[k] = e;
    }
  });
  for (int k = 0; k < gridSize; ++k) {
    if (failed[k]) {
      curve.points.assign(points.begin(), points.begin() + k);
      throw SweepAborted(*errors[k], std::move(curve));
    }
  }
  curve.points = std::move(points);

  const CMatrix feh = baselines::energy_beamformer(cfg, ch.G);
  curve.points.push_back({emax, metric_of(kind, cfg, ch.H, feh), received_power(ch.G, feh)});
  return curve;
}

std::vector<TraceRow> ConvergenceTable::best() const {
  std::vector<TraceRow> out;
  for (const auto& r : rows) {
    if (r.start == bestStart) out.push_back(r);
  }
  return out;
}

ConvergenceTable convergence_trace(const SystemConfig& cfg, const ChannelPair& ch,
                                   const alt::WeightSpec& weights, int starts, int iters,
                                   std::uint64_t seed, int workers) {
  require(iters >= 1, ErrorCode::InvalidArgument, "iters must be >= 1");
  alt::SolveOptions o;
  o.starts = starts;
  o.maxIters = iters;
  o.fixedIterations = true;
  o.seed = seed;
  o.workers = workers;
  const auto rep = alt::solve_with_weights(cfg, ch, weights, o);
  ConvergenceTable table;
  table.bestStart = rep.bestStart;
  for (int s = 0; s < static_cast<int>(rep.trace.size()); ++s) {
    const auto& tr = rep.trace[s];
    for (int i = 0; i < static_cast<int>(tr.size()); ++i) {
      table.rows.push_back({s, i + 1, tr[i].mse, tr[i].rateBits});
    }
  }
  return table;
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::WmmseIdentity: return "wmmse-identity";
    case Scheme::RateOracle: return "rate-oracle";
    case Scheme::EnergyBeamformer: return "energy-beamformer";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::WmmseIdentity, Scheme::RateOracle, Scheme::EnergyBeamformer}) {
    if (to_string(s) == name) return s;
  }
  fail(ErrorCode::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

double BerResult::ber(std::size_t s, std::size_t k) const {
  const auto n = bitsTotal[s][k];
  return n == 0 ? 0.0 : static_cast<double>(bitErrors[s][k]) / static_cast<double>(n);
}

std::size_t BerResult::index_of(Scheme s) const {
  const auto it = std::find(schemes.begin(), schemes.end(), s);
  require(it != schemes.end(), ErrorCode::InvalidArgument, "scheme not in result");
  return static_cast<std::size_t>(it - schemes.begin());
}

Complex qpsk_symbol(unsigned b0, unsigned b1) {
  const double a = std::numbers::sqrt2 / 2.0;
  return {a * (1.0 - 2.0 * (b0 & 1u)), a * (1.0 - 2.0 * (b1 & 1u))};
}

namespace {

CMatrix scheme_precoder(Scheme s, const SystemConfig& cfg, const ChannelPair& ch,
                        const alt::SolveOptions& solveOpt, std::uint64_t seed) {
  switch (s) {
    case Scheme::WmmseIdentity: {
      SystemConfig c = cfg;
      c.weights = RVector::Ones(cfg.nStreams);
      alt::SolveOptions o = solveOpt;
      o.workers = 1;
      o.seed = seed;
      return alt::solve(c, ch, o).best.precoder;
    }
    case Scheme::RateOracle:
      return baselines::rate_optimal_oracle(cfg, ch.H, ch.G, cfg.targetEnergy).F;
    case Scheme::EnergyBeamformer:
      return baselines::energy_beamformer(cfg, ch.G);
  }
  return {};
}

}  // namespace

BerResult ber_montecarlo(const SystemConfig& cfgIn, const std::vector<Scheme>& schemes,
                         int nChannels, int symbolsPerChannel, const std::vector<double>& snrGridDb,
                         std::uint64_t seed, const BerOptions& opt) {
  require(nChannels >= 1, ErrorCode::InvalidArgument, "nChannels must be >= 1");
  require(symbolsPerChannel >= 1, ErrorCode::InvalidArgument, "symbolsPerChannel must be >= 1");
  require(!schemes.empty(), ErrorCode::InvalidArgument, "no schemes given");
  require(opt.targetFraction >= 0.0 && opt.targetFraction <= 1.0, ErrorCode::InvalidArgument,
          "targetFraction must lie in [0, 1]");
  SystemConfig base = cfgIn;
  if (base.weights.size() != base.nStreams) base.weights = RVector::Ones(base.nStreams);

  const std::size_t ns = schemes.size();
  const std::size_t nk = snrGridDb.size();
  const std::size_t nSym = static_cast<std::size_t>(symbolsPerChannel);
  const std::uint64_t bitsPerChannel = 2ull * base.nStreams * nSym;

  // counts[c][s * nk + k]
  std::vector<std::vector<std::uint64_t>> counts(nChannels,
                                                 std::vector<std::uint64_t>(ns * nk, 0));
  parallel_for(nChannels, opt.workers, [&](std::size_t c) {
    const std::uint64_t chSeed = derive_seed(seed, c);
    const ChannelPair ch =
        generate_channels(base, opt.distId, opt.distEh, chSeed, opt.pathlossExponent);
    for (std::size_t k = 0; k < nk; ++k) {
      SystemConfig cfg = base;
      cfg.powerBudget =
          std::pow(10.0, snrGridDb[k] / 10.0) * std::pow(opt.distId, opt.pathlossExponent);
      cfg.targetEnergy = opt.targetFraction * max_energy(cfg, ch.G);

      // Same symbols and noise for every scheme at this point.
      Rng rng(derive_seed(chSeed, 0x5157ull + k));
      kernels::SplitBatch x(cfg.nStreams, nSym);
      for (int r = 0; r < cfg.nStreams; ++r) {
        for (std::size_t i = 0; i < nSym; ++i) {
          const std::uint64_t b = rng.next_u64();
          x.set(r, i, qpsk_symbol(b & 1u, (b >> 1) & 1u));
        }
      }
      kernels::SplitBatch noise(cfg.nId, nSym);
      for (int r = 0; r < cfg.nId; ++r) {
        for (std::size_t i = 0; i < nSym; ++i) noise.set(r, i, rng.complex_gaussian());
      }

      kernels::SplitBatch est(cfg.nStreams, nSym);
      for (std::size_t s = 0; s < ns; ++s) {
        const CMatrix F = scheme_precoder(schemes[s], cfg, ch, opt.solve, derive_seed(chSeed, 1 + k));
        // gamma^-1 L for the Wiener receiver is the gamma = 1 filter.
        const CMatrix A = wiener::wiener_receiver(ch.H, F, 1.0);
        const CMatrix AHF = A * ch.H * F;
        kernels::apply_matrix(AHF, std::as_const(x).view(), est.view(), false);
        kernels::apply_matrix(A, std::as_const(noise).view(), est.view(), true);
        std::uint64_t errs = kernels::count_sign_mismatches(est.re(), x.re()) +
                             kernels::count_sign_mismatches(est.im(), x.im());
        counts[c][s * nk + k] = errs;
      }
    }
  });

  BerResult res;
  res.snrGridDb = snrGridDb;
  res.schemes = schemes;
  res.channelsUsed = nChannels;
  res.bitsPerChannel = bitsPerChannel;
  res.bitErrors.assign(ns, std::vector<std::uint64_t>(nk, 0));
  res.bitsTotal.assign(ns, std::vector<std::uint64_t>(nk, bitsPerChannel * nChannels));
  for (int c = 0; c < nChannels; ++c) {
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t k = 0; k < nk; ++k) res.bitErrors[s][k] += counts[c][s * nk + k];
    }
  }
  return res;
}

namespace {

// SNR at which the BER curve first drops to `level`, interpolating log10 BER
// linearly in dB.
double crossing_db(const BerResult& r, std::size_t s, double level) {
  const double target = std::log10(level);
  for (std::size_t k = 0; k + 1 < r.snrGridDb.size(); ++k) {
    const double b0 = r.ber(s, k);
    const double b1 = r.ber(s, k + 1);
    if (b0 >= level && b1 <= level) {
      if (b1 <= 0.0) return r.snrGridDb[k + 1];
      const double l0 = std::log10(b0);
      const double l1 = std::log10(b1);
      if (l0 == l1) return r.snrGridDb[k];
      const double t = (l0 - target) / (l0 - l1);
      return r.snrGridDb[k] + t * (r.snrGridDb[k + 1] - r.snrGridDb[k]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double snr_gain_db(const BerResult& r, Scheme a, Scheme b, double berLevel) {
  return crossing_db(r, r.index_of(b), berLevel) - crossing_db(r, r.index_of(a), berLevel);
}

}  // namespace swipt::exp
