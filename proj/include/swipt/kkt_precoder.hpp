#pragma once

// Optimal precoder for a fixed receiver L under the power budget and the
// energy target. With
//
//   Y = H^H L^H W L H + Tr(W L L^H)/P_T * I
//   Z = G^H G - E_bar/P_T * I
//
// the unscaled precoder is F_bar(x) = (Y - x Z)^-1 H^H L^H W, the dual
// function is J(x) = Tr(F_bar(x)^H Z F_bar(x)) and the returned precoder is
// F = gamma_hat * F_bar(lambda_hat), gamma_hat = sqrt(P_T / Tr(F_bar F_bar^H)).
// lambda_hat = 0 when J(0) >= 0, otherwise the unique root of J on
// (0, 1/kappa), where kappa is the largest eigenvalue of Z Y^-1.

#include "swipt/linalg.hpp"
#include "swipt/model.hpp"

namespace swipt::kkt {

inline constexpr double kFeasibilityMargin = 1e-9;  // eps_feas
inline constexpr double kDegenerateTol = 1e-12;
inline constexpr double kMaxCondition = 1e14;
inline constexpr double kDefiniteTol = 1e-12;
inline constexpr int kMaxBisection = 200;

struct DualState {
  double lambdaBar = 0.0;
  double muBar = 0.0;
  double kappa = 0.0;
  double jAtZero = 0.0;
};

struct PrecoderAux {
  CMatrix Y;
  CMatrix Z;
  CMatrix rhs;  // H^H L^H W
  double trWLL = 0.0;
  double powerBudget = 0.0;
  double targetEnergy = 0.0;

  /// K = Y - lambdaBar Z = H^H L^H W L H - lambdaBar G^H G + muBar I.
  CMatrix kernel(double lambdaBar) const;
};

/// Builds Y, Z and the right-hand side. Throws DegenerateReceiver when
/// Tr(W L L^H) <= 1e-12.
PrecoderAux build_aux(const SystemConfig& cfg, const CMatrix& H, const CMatrix& G,
                      const CMatrix& L);

/// Largest eigenvalue of Y^-1/2 Z Y^-1/2. Throws SingularY when cond(Y) > 1e14.
double feasibility_bound(const PrecoderAux& aux);

/// F_bar(lambdaBar) by a Cholesky solve. Throws InfeasibleDual when
/// Y - lambdaBar Z has an eigenvalue below 1e-12 ||Y||.
CMatrix precoder_unscaled(const PrecoderAux& aux, double lambdaBar);

/// J(lambdaBar) = Tr(F_bar^H Z F_bar).
double dual_function(const PrecoderAux& aux, double lambdaBar);

/// J in diagonalized form. With C = Y^-1/2 Z Y^-1/2 = U diag(c) U^H and
/// M = U^H Y^-1/2 H^H L^H W,
///   J(x) = sum_i c_i m_i / (1 - x c_i)^2,   m_i = ||row_i(M)||^2,
/// which costs O(nTx) per evaluation and makes the monotonicity explicit.
struct SecularForm {
  RVector c;
  RVector m;
  CMatrix basis;  // Y^-1/2 U
  CMatrix M;
  double kappa() const { return c.maxCoeff(); }
  double value(double x) const;
  double derivative(double x) const;
  /// F_bar(x) = Y^-1/2 U diag(1 / (1 - x c)) M.
  CMatrix precoder(double x) const;
  /// Limit solution at x = 1/kappa when M has (numerically) no weight on
  /// the top eigenvector: the singular direction carries just enough
  /// energy to make J vanish.
  CMatrix precoder_at_bound() const;
};
SecularForm secular_form(const PrecoderAux& aux);

/// Bisection for the root of J on (0, 1/kappa), kappa > 0 and J(0) < 0.
/// The bracket starts at (1 - 1e-6)/kappa and moves toward 1/kappa while J
/// is still negative there. Returns the upper end of the final bracket, so
/// J(lambdaBar) >= 0. If J is still negative within 1e-15 relative of
/// 1/kappa the root sits on the bound: lambdaBar = 1/kappa and atBound is
/// set (use SecularForm::precoder_at_bound).
struct DualRoot {
  double lambdaBar = 0.0;
  int steps = 0;
  bool atBound = false;
};
DualRoot find_dual_root(const SecularForm& sec);

struct PrecoderSolution {
  CMatrix F;
  DualState dual;
  double gammaHat = 0.0;
  int bisectionSteps = 0;
};

/// Optimal precoder for receiver L. With enforceEnergy = false the energy
/// constraint is dropped (lambdaBar pinned to 0) and Z uses E_bar = 0.
/// Throws TargetUnattainable when E_bar > E_max, BisectionFailure when
/// |J(lambda_hat)| > 1e-10 P_T ||Z|| after the search.
PrecoderSolution solve_precoder(const SystemConfig& cfg, const CMatrix& H, const CMatrix& G,
                                const CMatrix& L, bool enforceEnergy = true);

/// Residuals of the stationarity, feasibility and slackness conditions at
/// (gamma, F, L) with multipliers (lambdaBar, muBar).
struct KktResiduals {
  double receiver = 0.0;       // ||L H F F^H H^H + L - gamma F^H H^H|| / ||gamma F^H H^H||
  double precoder = 0.0;       // ||K F - gamma H^H L^H W|| / ||gamma H^H L^H W||
  double scale = 0.0;          // |Tr(W L H F F^H H^H L^H + W L L^H) - gamma Tr(Re W L H F)| / lhs
  double energyViolation = 0.0;  // max(0, E_bar - E) / max(E_bar, tiny)
  double powerViolation = 0.0;   // max(0, Tr(F F^H) - P_T) / P_T
  double dualViolation = 0.0;    // max(0, -lambdaBar, -muBar)
  /// Slackness products in MSE units (multipliers divided by gamma^2)
  /// relative to the MSE at the point.
  double energySlackness = 0.0;
  double powerSlackness = 0.0;
};
KktResiduals kkt_residuals(const SystemConfig& cfg, const CMatrix& H, const CMatrix& G,
                           const Transceiver& t, const DualState& dual);

/// Relative energy tolerance 1e-8 * E_bar used for the lambdaBar = 0 test.
double energy_tolerance(double targetEnergy);

}  // namespace swipt::kkt
