#pragma once

// System model for two-user MIMO broadcast with one information-decoding
// (ID) user and one energy-harvesting (EH) user:
//
//   x_hat = L (H F x + n),   E[x x^H] = I,  n ~ CN(0, I)
//   error  e = x_hat / gamma - x
//   energy Q = delta * Tr(F^H G^H G F)
//
// Solver code works in the normalized signal model (unit noise power) with
// delta folded into the target, so "energy" below means Tr(F^H G^H G F)
// unless a function says otherwise.

#include <cstdint>

#include "swipt/linalg.hpp"

namespace swipt {

struct SystemConfig {
  int nTx = 4;
  int nStreams = 4;
  int nId = 4;
  int nEh = 4;
  double powerBudget = 1e5;
  double efficiency = 1.0;
  /// Diagonal of the real nonnegative weight matrix W (length nStreams).
  RVector weights;
  /// Energy target on the delta = 1 scale.
  double targetEnergy = 0.0;

  /// Throws Error{InvalidArgument} on any violated invariant.
  void validate() const;

  RMatrix weight_matrix() const { return weights.asDiagonal(); }

  /// nTx = nStreams = nId = nEh = n with W = I.
  static SystemConfig square(int n, double powerBudget, double targetEnergy = 0.0);
};

struct ChannelPair {
  CMatrix H;  // nId x nTx, transmitter -> ID user
  CMatrix G;  // nEh x nTx, transmitter -> EH user
  double distId = 1.0;
  double distEh = 1.0;
  std::uint64_t seed = 0;
};

struct Transceiver {
  CMatrix precoder;  // F, nTx x nStreams
  CMatrix receiver;  // L, nStreams x nId
  double scale = 1.0;  // gamma
};

/// Rayleigh channels with pathloss: H = d_h^(-exponent/2) * CN(0,1) entries,
/// likewise G. H is drawn before G from one stream seeded by `seed`.
ChannelPair generate_channels(const SystemConfig& cfg, double distId, double distEh,
                              std::uint64_t seed, double pathlossExponent = 3.0);

/// Tr(F^H G^H G F), the delta = 1 energy used by the solvers.
double received_power(const CMatrix& G, const CMatrix& F);

/// delta * Tr(F^H G^H G F).
double harvested_energy(const SystemConfig& cfg, const CMatrix& G, const CMatrix& F);

/// Tr(W (LHF/gamma - I)(LHF/gamma - I)^H) + Tr(W L L^H) / gamma^2.
double weighted_mse(const SystemConfig& cfg, const CMatrix& H, const Transceiver& t);

struct MseRate {
  double mse = 0.0;
  double rateBits = 0.0;
};

/// M = Tr(W (F^H H^H H F + I)^-1) (MMSE receiver) and
/// R = log2 |F^H H^H H F + I| (ML receiver).
MseRate mmse_and_rate(const SystemConfig& cfg, const CMatrix& H, const CMatrix& F);

/// Per-antenna receive SNR in dB from a link budget.
double snr_budget_db(double noisePsdDbmHz, double bandwidthHz, double txPowerDbm,
                     double pathlossDb);

/// Attainable energy ceiling P_T * g1, g1 the largest eigenvalue of G^H G.
double max_energy(const SystemConfig& cfg, const CMatrix& G);

/// Throws Error{DimensionMismatch} if H, G do not match cfg.
void check_channel_dims(const SystemConfig& cfg, const CMatrix& H, const CMatrix& G);

}  // namespace swipt
