#include "swipt/alternating.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swipt/baselines.hpp"
#include "swipt/errors.hpp"
#include "swipt/parallel.hpp"
#include "swipt/rng.hpp"
#include "swipt/wiener.hpp"

namespace swipt::alt {

namespace {

constexpr int kWarmStartIters = 500;
constexpr double kWarmStartTol = 1e-12;

struct StartResult {
  Transceiver t;
  double mse = std::numeric_limits<double>::infinity();
  double energy = 0.0;
  kkt::DualState dual;
  std::vector<IterationRecord> trace;
  int iters = 0;
  bool degenerate = false;
};

StartResult run_start(const SystemConfig& cfg, const ChannelPair& ch, const CMatrix& init,
                      int maxIters, double tol, bool fixedIterations, bool enforceEnergy) {
  StartResult r;
  const double pt = cfg.powerBudget;
  double gamma = std::sqrt(pt / init.squaredNorm());
  CMatrix F = gamma * init;
  try {
    for (int it = 1; it <= maxIters; ++it) {
      CMatrix L = wiener::wiener_receiver(ch.H, F, gamma);
      gamma = wiener::optimal_gamma(cfg, ch.H, F, L);
      auto sol = kkt::solve_precoder(cfg, ch.H, ch.G, L, enforceEnergy);
      F = std::move(sol.F);
      gamma = sol.gammaHat;
      r.dual = sol.dual;
      r.t = Transceiver{F, std::move(L), gamma};

      const auto mr = mmse_and_rate(cfg, ch.H, F);
      const double energy = received_power(ch.G, F);
      const double prev = r.trace.empty() ? 0.0 : r.trace.back().mse;
      r.trace.push_back({mr.mse, mr.rateBits, energy});
      r.iters = it;
      r.mse = mr.mse;
      r.energy = energy;
      if (!fixedIterations && it > 1 && std::abs(prev - mr.mse) <= tol * mr.mse) break;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateReceiver && e.code() != ErrorCode::NoPositiveScale) throw;
    if (r.trace.empty()) {
      r.degenerate = true;
      r.iters = 0;
    }
  }
  return r;
}

bool better(const StartResult& a, const StartResult& b) {
  if (a.degenerate != b.degenerate) return !a.degenerate;
  const double scale = std::max(std::abs(a.mse), std::abs(b.mse));
  // Equal up to rounding (about 50 ulp); larger gaps are real progress.
  if (std::abs(a.mse - b.mse) > 1e-14 * scale) return a.mse < b.mse;
  return a.energy > b.energy;
}

SolveReport bypass_with_energy_beamformer(const SystemConfig& cfg, const ChannelPair& ch) {
  SolveReport rep;
  const CMatrix F = baselines::energy_beamformer(cfg, ch.G);
  const double gamma = 1.0;
  rep.best = Transceiver{F, wiener::wiener_receiver(ch.H, F, gamma), gamma};
  rep.mse = mmse_and_rate(cfg, ch.H, F).mse;
  rep.energy = received_power(ch.G, F);
  const double inf = std::numeric_limits<double>::infinity();
  rep.dual = kkt::DualState{inf, inf, std::numeric_limits<double>::quiet_NaN(), 0.0};
  rep.startsUsed = 1;
  rep.itersUsed = {0};
  rep.degenerate = {false};
  rep.trace = {{IterationRecord{rep.mse, mmse_and_rate(cfg, ch.H, F).rateBits, rep.energy}}};
  rep.bestStart = 0;
  rep.endpointBypass = true;
  return rep;
}

}  // namespace

CMatrix eigenmode_start(const SystemConfig& cfg, const CMatrix& H) {
  auto e = linalg::eigh(H.adjoint() * H);
  const auto nt = H.cols();
  CMatrix F(nt, cfg.nStreams);
  for (int k = 0; k < cfg.nStreams; ++k) F.col(k) = e.vectors.col(nt - 1 - k);
  return F * std::sqrt(cfg.powerBudget / cfg.nStreams);
}

SolveReport solve(const SystemConfig& cfg, const ChannelPair& ch, const SolveOptions& opt) {
  cfg.validate();
  check_channel_dims(cfg, ch.H, ch.G);
  require(opt.starts >= 1, ErrorCode::InvalidArgument, "starts must be >= 1");
  require(opt.maxIters >= 1, ErrorCode::InvalidArgument, "maxIters must be >= 1");
  require(opt.tol >= 0.0, ErrorCode::InvalidArgument, "tol must be nonnegative");

  if (opt.enforceEnergy) {
    const double emax = max_energy(cfg, ch.G);
    if (cfg.targetEnergy > emax) {
      fail(ErrorCode::TargetUnattainable, "energy target exceeds P_T * g1");
    }
    if (cfg.targetEnergy >= emax * (1.0 - kkt::kFeasibilityMargin)) {
      return bypass_with_energy_beamformer(cfg, ch);
    }
  }

  std::vector<CMatrix> inits;
  inits.reserve(opt.starts);
  if (opt.warmStart) {
    inits.push_back(*opt.warmStart);
  } else if (opt.enforceEnergy) {
    auto warm = run_start(cfg, ch, eigenmode_start(cfg, ch.H), kWarmStartIters, kWarmStartTol,
                          false, false);
    inits.push_back(warm.degenerate ? eigenmode_start(cfg, ch.H) : warm.t.precoder);
  } else {
    inits.push_back(eigenmode_start(cfg, ch.H));
  }
  for (const auto& x : opt.extraStarts) {
    if (static_cast<int>(inits.size()) >= opt.starts) break;
    require(x.rows() == cfg.nTx && x.cols() == cfg.nStreams, ErrorCode::DimensionMismatch,
            "extra start has the wrong shape");
    inits.push_back(x);
  }
  for (std::uint64_t r = 0; static_cast<int>(inits.size()) < opt.starts; ++r) {
    Rng rng(derive_seed(opt.seed, r));
    inits.push_back(rng.complex_gaussian_matrix(cfg.nTx, cfg.nStreams));
  }

  std::vector<StartResult> results(inits.size());
  parallel_for(inits.size(), opt.workers, [&](std::size_t j) {
    results[j] = run_start(cfg, ch, inits[j], opt.maxIters, opt.tol, opt.fixedIterations,
                           opt.enforceEnergy);
  });

  std::size_t best = 0;
  for (std::size_t j = 1; j < results.size(); ++j) {
    if (better(results[j], results[best])) best = j;
  }
  if (results[best].degenerate) {
    fail(ErrorCode::AllStartsDegenerate, "every start produced a degenerate receiver");
  }

  SolveReport rep;
  rep.startsUsed = static_cast<int>(results.size());
  for (auto& r : results) {
    rep.itersUsed.push_back(r.iters);
    rep.degenerate.push_back(r.degenerate);
    rep.trace.push_back(std::move(r.trace));
  }
  rep.best = std::move(results[best].t);
  rep.mse = results[best].mse;
  rep.energy = results[best].energy;
  rep.dual = results[best].dual;
  rep.bestStart = static_cast<int>(best);
  return rep;
}

RVector resolve_weights(int nStreams, const CMatrix& H, const WeightSpec& spec) {
  switch (spec.mode) {
    case WeightMode::Identity:
      return RVector::Ones(nStreams);
    case WeightMode::ChannelEigenvalues: {
      auto e = linalg::eigh(H.adjoint() * H);
      const auto n = e.values.size();
      require(nStreams <= n, ErrorCode::DimensionMismatch, "more streams than eigenvalues");
      RVector w(nStreams);
      for (int k = 0; k < nStreams; ++k) w(k) = std::max(0.0, e.values(n - 1 - k));
      return w;
    }
    case WeightMode::Explicit:
      require(spec.explicitWeights.size() == nStreams, ErrorCode::DimensionMismatch,
              "explicit weights must have one entry per stream");
      return spec.explicitWeights;
  }
  return RVector::Ones(nStreams);
}

SolveReport solve_with_weights(SystemConfig cfg, const ChannelPair& ch, const WeightSpec& spec,
                               const SolveOptions& opt) {
  cfg.weights = resolve_weights(cfg.nStreams, ch.H, spec);
  return solve(cfg, ch, opt);
}

}  // namespace swipt::alt
