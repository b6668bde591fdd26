#pragma once

// Corner-point designs of the MSE-energy region and the rate-optimal
// reference used to judge the rate-energy boundary.

#include "swipt/alternating.hpp"
#include "swipt/model.hpp"

namespace swipt::baselines {

struct RegionEndpoints {
  double eMax = 0.0;  // P_T g1
  double eID = 0.0;   // energy of the unconstrained WMMSE precoder
  double mMin = 0.0;  // MSE of the unconstrained WMMSE precoder
  double mEH = 0.0;   // MSE of the energy beamformer
};

/// sqrt(P_T) [v_g1 0 ... 0], v_g1 the top right singular vector of G with
/// its largest-magnitude entry made real nonnegative.
CMatrix energy_beamformer(const SystemConfig& cfg, const CMatrix& G);

struct UnconstrainedResult {
  CMatrix F;
  double mMin = 0.0;
  double eID = 0.0;
};

/// Alternating WMMSE with the energy constraint removed. Runs a fixed
/// max(opt.maxIters, kUnconstrainedIters) iterations per start: the MSE
/// flattens long before the precoder (and so E_ID) settles, so the
/// relative-change stop is not used here.
inline constexpr int kUnconstrainedIters = 500;
UnconstrainedResult unconstrained_wmmse(const SystemConfig& cfg, const ChannelPair& ch,
                                        const alt::SolveOptions& opt = {});

RegionEndpoints region_endpoints(const SystemConfig& cfg, const ChannelPair& ch,
                                 const alt::SolveOptions& opt = {});

struct RateOracleResult {
  CMatrix F;  // nTx x nStreams with F F^H = Q (top nStreams eigenpairs)
  CMatrix Q;
  double rateBits = 0.0;     // log2 |I + H Q H^H|
  double dualityGapBits = 0.0;
  double nu = 0.0;           // power multiplier (nats scale)
  double lambda = 0.0;       // energy multiplier (nats scale)
  double energy = 0.0;       // Tr(G^H G Q)
};

/// maximize log|I + H Q H^H| over Q >= 0, Tr(Q) <= P_T, Tr(G^H G Q) >= eBar.
///
/// Lagrangian dual with A = nu I - lambda G^H G: for fixed multipliers the
/// maximizer is Q = A^-1/2 Qw A^-1/2 with Qw the unit-level water-filling
/// solution for the whitened channel H A^-1/2. nu is set by bisection to
/// spend the full budget, and lambda by an outer bisection on the
/// (monotone) energy. nu is carried as lambda g1 + s with s > 0, so A is
/// formed from the eigenvalues of G^H G without cancellation.
/// Throws TargetUnattainable when eBar > E_max.
RateOracleResult rate_optimal_oracle(const SystemConfig& cfg, const CMatrix& H, const CMatrix& G,
                                     double eBar);

/// log2 |I + H Q H^H|.
double rate_of_covariance(const CMatrix& H, const CMatrix& Q);

}  // namespace swipt::baselines
