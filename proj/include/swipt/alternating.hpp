#pragma once

// Multi-start alternating optimization of (F, L, gamma): each start
// alternates the Wiener receiver update with the KKT precoder update until
// the MSE settles, and the best start wins.

#include <cstdint>
#include <optional>
#include <vector>

#include "swipt/kkt_precoder.hpp"
#include "swipt/model.hpp"

namespace swipt::alt {

struct IterationRecord {
  double mse = 0.0;       // Tr(W (F^H H^H H F + I)^-1)
  double rateBits = 0.0;  // log2 |F^H H^H H F + I|
  double energy = 0.0;    // Tr(F^H G^H G F)
};

struct SolveOptions {
  /// Total number of starts, including the deterministic warm start.
  int starts = 20;
  int maxIters = 100;
  /// Stop when |M(t-1) - M(t)| <= tol * M(t).
  double tol = 1e-8;
  /// Run exactly maxIters iterations per start.
  bool fixedIterations = false;
  std::uint64_t seed = 1;
  /// false drops the energy constraint (lambdaBar pinned to 0).
  bool enforceEnergy = true;
  /// Start 0 initializer. When unset it is the unconstrained WMMSE precoder
  /// (or, with enforceEnergy = false, the equal-power eigenmode precoder).
  std::optional<CMatrix> warmStart;
  /// Additional deterministic initializers tried after the warm start.
  std::vector<CMatrix> extraStarts;
  int workers = 1;
};

struct SolveReport {
  Transceiver best;
  double mse = 0.0;
  double energy = 0.0;
  kkt::DualState dual;
  std::vector<std::vector<IterationRecord>> trace;  // per start
  int startsUsed = 0;
  std::vector<int> itersUsed;  // per start; 0 for degenerate starts
  std::vector<bool> degenerate;
  int bestStart = -1;
  /// The target sat within eps_feas of E_max and the closed-form energy
  /// beamformer was returned.
  bool endpointBypass = false;
};

/// Right singular vectors of H for the nStreams largest singular values,
/// scaled to the full power budget.
CMatrix eigenmode_start(const SystemConfig& cfg, const CMatrix& H);

/// Throws TargetUnattainable when E_bar > E_max and AllStartsDegenerate when
/// no start produced a usable receiver.
SolveReport solve(const SystemConfig& cfg, const ChannelPair& ch, const SolveOptions& opt = {});

enum class WeightMode { Identity, ChannelEigenvalues, Explicit };

struct WeightSpec {
  WeightMode mode = WeightMode::Identity;
  RVector explicitWeights;
};

/// Identity: W = I. ChannelEigenvalues: the nStreams largest eigenvalues of
/// H^H H in descending order. Explicit: the given diagonal.
RVector resolve_weights(int nStreams, const CMatrix& H, const WeightSpec& spec);

SolveReport solve_with_weights(SystemConfig cfg, const ChannelPair& ch, const WeightSpec& spec,
                               const SolveOptions& opt = {});

}  // namespace swipt::alt
