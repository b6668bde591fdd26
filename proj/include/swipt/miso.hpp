#pragma once

// Single-antenna ID user (H = h^H, one stream). The MMSE beamformer does not
// depend on the receiver scalar and is available in closed form up to the
// scalar energy multiplier:
//
//   f = gamma A^-1 h / (1 + h^H A^-1 h),   A = I/P_T - lambdaBar Z,
//
// with MSE (1 + h^H A^-1 h)^-1 and lambdaBar found on (0, 1/zeta), zeta the
// largest eigenvalue of Z (h h^H + I/P_T)^-1.

#include "swipt/alternating.hpp"
#include "swipt/model.hpp"

namespace swipt::miso {

struct BeamformerResult {
  CVector f;
  double lambdaBar = 0.0;
  double zeta = 0.0;
  double mse = 0.0;
  bool endpoint = false;  // target within eps_feas of E_max
};

/// Requires nStreams = nId = 1; weights are ignored. Throws
/// TargetUnattainable when E_bar > E_max.
BeamformerResult solve_miso(const SystemConfig& cfg, const CVector& h, const CMatrix& G);

/// The same beamformer derived with an explicit receiver scalar l:
/// f = gamma (h h^H + I/P_T - nu Z)^-1 h / l, nu = lambdaBar / |l|^2.
/// Power-normalized and phase-normalized.
CVector beamformer_with_receiver(const SystemConfig& cfg, const CVector& h, const CMatrix& G,
                                 Complex l);

/// |MSE of the general alternating solver - MSE of solve_miso|.
double crosscheck_general(const SystemConfig& cfg, const CVector& h, const CMatrix& G,
                          const alt::SolveOptions& opt = {});

/// Received SNR |h^H f|^2 (unit noise).
double snr(const CVector& h, const CVector& f);

}  // namespace swipt::miso
