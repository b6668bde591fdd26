#include "swipt/kkt_precoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swipt/errors.hpp"

namespace swipt::kkt {

CMatrix PrecoderAux::kernel(double lambdaBar) const {
  return linalg::hermitian_part(Y - lambdaBar * Z);
}

double energy_tolerance(double targetEnergy) { return 1e-8 * targetEnergy; }

PrecoderAux build_aux(const SystemConfig& cfg, const CMatrix& H, const CMatrix& G,
                      const CMatrix& L) {
  require(L.rows() == cfg.nStreams && L.cols() == H.rows(), ErrorCode::DimensionMismatch,
          "receiver must be nStreams x nId");
  require(G.cols() == H.cols(), ErrorCode::DimensionMismatch, "H and G disagree on nTx");
  const auto nt = H.cols();
  const RMatrix W = cfg.weight_matrix();
  PrecoderAux aux;
  aux.powerBudget = cfg.powerBudget;
  aux.targetEnergy = cfg.targetEnergy;
  aux.trWLL = 0.0;
  for (Eigen::Index k = 0; k < L.rows(); ++k) aux.trWLL += cfg.weights(k) * L.row(k).squaredNorm();
  if (!(aux.trWLL > kDegenerateTol)) {
    fail(ErrorCode::DegenerateReceiver, "Tr(W L L^H) vanishes; re-initialize the start");
  }
  const CMatrix lh = L * H;
  const CMatrix I = CMatrix::Identity(nt, nt);
  aux.Y = linalg::hermitian_part(lh.adjoint() * W * lh + (aux.trWLL / cfg.powerBudget) * I);
  aux.Z = linalg::hermitian_part(G.adjoint() * G - (cfg.targetEnergy / cfg.powerBudget) * I);
  aux.rhs = lh.adjoint() * W;
  return aux;
}

namespace {

struct YRoot {
  CMatrix invSqrt;
};

YRoot inverse_sqrt_y(const PrecoderAux& aux) {
  auto e = linalg::eigh(aux.Y);
  const double ymin = e.values(0);
  const double ymax = e.values(e.values.size() - 1);
  if (!(ymin > 0.0) || ymax / ymin > kMaxCondition) {
    fail(ErrorCode::SingularY, "Y is singular or ill-conditioned");
  }
  const RVector s = e.values.array().rsqrt();
  return {e.vectors * s.asDiagonal() * e.vectors.adjoint()};
}

}  // namespace

SecularForm secular_form(const PrecoderAux& aux) {
  const auto root = inverse_sqrt_y(aux);
  const CMatrix C = linalg::hermitian_part(root.invSqrt * aux.Z * root.invSqrt);
  auto e = linalg::eigh(C);
  SecularForm s;
  s.basis = root.invSqrt * e.vectors;
  s.M = e.vectors.adjoint() * root.invSqrt * aux.rhs;
  s.c = e.values;
  s.m = s.M.rowwise().squaredNorm();
  return s;
}

double SecularForm::value(double x) const {
  double j = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double d = 1.0 - x * c(i);
    j += c(i) * m(i) / (d * d);
  }
  return j;
}

double SecularForm::derivative(double x) const {
  double dj = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double d = 1.0 - x * c(i);
    dj += 2.0 * c(i) * c(i) * m(i) / (d * d * d);
  }
  return dj;
}

CMatrix SecularForm::precoder(double x) const {
  RVector d(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) d(i) = 1.0 / (1.0 - x * c(i));
  return basis * (d.cast<Complex>().asDiagonal() * M);
}

CMatrix SecularForm::precoder_at_bound() const {
  const double k = kappa();
  const double cut = k * (1.0 - 1e-12);
  CMatrix rows = CMatrix::Zero(M.rows(), M.cols());
  double rest = 0.0;
  Eigen::Index top = -1;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c(i) >= cut) {
      if (top < 0 || m(i) > m(top)) top = i;
      continue;
    }
    const double d = 1.0 - c(i) / k;
    rows.row(i) = M.row(i) / d;
    rest += c(i) * m(i) / (d * d);
  }
  const double t = std::sqrt(std::max(0.0, -rest / k));
  if (m(top) > 0.0) {
    rows.row(top) = t * M.row(top) / std::sqrt(m(top));
  } else {
    rows(top, 0) = t;
  }
  return basis * rows;
}

DualRoot find_dual_root(const SecularForm& sec) {
  const double kappa = sec.kappa();
  // gaps 1e-6 .. 1e-15
  double hi = 0.0;
  bool crossed = false;
  for (int e = 6; e <= 15 && !crossed; ++e) {
    hi = (1.0 - std::pow(10.0, -e)) / kappa;
    crossed = sec.value(hi) >= 0.0;
  }
  if (!crossed) return {1.0 / kappa, 0, true};
  double lo = 0.0;
  int steps = 0;
  for (; steps < kMaxBisection; ++steps) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (sec.value(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, steps};
}

double feasibility_bound(const PrecoderAux& aux) { return secular_form(aux).kappa(); }

CMatrix precoder_unscaled(const PrecoderAux& aux, double lambdaBar) {
  const CMatrix K = aux.kernel(lambdaBar);
  Eigen::SelfAdjointEigenSolver<CMatrix> ek(K, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<CMatrix> ey(aux.Y, Eigen::EigenvaluesOnly);
  const double ynorm = ey.eigenvalues().cwiseAbs().maxCoeff();
  if (!(ek.eigenvalues()(0) >= kDefiniteTol * ynorm)) {
    fail(ErrorCode::InfeasibleDual, "Y - lambdaBar Z is not positive definite");
  }
  return linalg::solve_hpd(K, aux.rhs);
}

double dual_function(const PrecoderAux& aux, double lambdaBar) {
  const CMatrix f = precoder_unscaled(aux, lambdaBar);
  return linalg::inner_re(f, aux.Z * f);
}

PrecoderSolution solve_precoder(const SystemConfig& cfg, const CMatrix& H, const CMatrix& G,
                                const CMatrix& L, bool enforceEnergy) {
  SystemConfig local = cfg;
  if (!enforceEnergy) local.targetEnergy = 0.0;
  if (enforceEnergy) {
    const double emax = max_energy(cfg, G);
    if (cfg.targetEnergy > emax) {
      fail(ErrorCode::TargetUnattainable, "energy target exceeds P_T * g1");
    }
  }
  const PrecoderAux aux = build_aux(local, H, G, L);
  const double pt = cfg.powerBudget;

  PrecoderSolution out;
  CMatrix fbar = precoder_unscaled(aux, 0.0);
  const double j0 = linalg::inner_re(fbar, aux.Z * fbar);
  out.dual.jAtZero = j0;

  // gamma^2 J is the energy surplus, so J(0) within the energy tolerance
  // counts as satisfied.
  const double surplus0 = j0 * pt / fbar.squaredNorm();
  double lambda = 0.0;
  if (enforceEnergy && surplus0 < -energy_tolerance(local.targetEnergy)) {
    const SecularForm sec = secular_form(aux);
    const double kappa = sec.kappa();
    out.dual.kappa = kappa;
    if (!(kappa > 0.0)) {
      fail(ErrorCode::TargetUnattainable, "energy target cannot be met by any precoder");
    }
    const auto root = find_dual_root(sec);
    out.bisectionSteps = root.steps;
    lambda = root.lambdaBar;
    fbar = root.atBound ? sec.precoder_at_bound() : precoder_unscaled(aux, lambda);
    const double j = linalg::inner_re(fbar, aux.Z * fbar);
    const double tolJ = 1e-10 * pt * linalg::hermitian_norm2(aux.Z);
    if (!(std::abs(j) <= tolJ)) {
      fail(ErrorCode::BisectionFailure, "bisection did not reach |J| <= tolJ");
    }
  } else if (enforceEnergy) {
    out.dual.kappa = std::numeric_limits<double>::quiet_NaN();
  }

  out.gammaHat = std::sqrt(pt / fbar.squaredNorm());
  out.F = out.gammaHat * fbar;
  out.dual.lambdaBar = lambda;
  out.dual.muBar = (lambda * local.targetEnergy + aux.trWLL) / pt;
  return out;
}

KktResiduals kkt_residuals(const SystemConfig& cfg, const CMatrix& H, const CMatrix& G,
                           const Transceiver& t, const DualState& dual) {
  const CMatrix& F = t.precoder;
  const CMatrix& L = t.receiver;
  const double g = t.scale;
  const RMatrix W = cfg.weight_matrix();
  const auto nt = F.rows();
  const CMatrix hf = H * F;
  KktResiduals r;

  const CMatrix target5 = g * hf.adjoint();
  r.receiver = (L * hf * hf.adjoint() + L - target5).norm() / target5.norm();

  const CMatrix lh = L * H;
  const CMatrix K = lh.adjoint() * W * lh - dual.lambdaBar * (G.adjoint() * G) +
                    dual.muBar * CMatrix::Identity(nt, nt);
  const CMatrix target6 = g * lh.adjoint() * W;
  r.precoder = (K * F - target6).norm() / target6.norm();

  const CMatrix lhf = L * hf;
  double lhs = 0.0;
  double cross = 0.0;
  for (Eigen::Index k = 0; k < cfg.weights.size(); ++k) {
    lhs += cfg.weights(k) * (lhf.row(k).squaredNorm() + L.row(k).squaredNorm());
    cross += cfg.weights(k) * lhf(k, k).real();
  }
  r.scale = std::abs(lhs - g * cross) / lhs;

  const double energy = received_power(G, F);
  const double power = F.squaredNorm();
  const double ebar = cfg.targetEnergy;
  r.energyViolation = std::max(0.0, ebar - energy) / std::max(ebar, 1e-300);
  r.powerViolation = std::max(0.0, power - cfg.powerBudget) / cfg.powerBudget;
  r.dualViolation = std::max({0.0, -dual.lambdaBar, -dual.muBar});

  const double mse = weighted_mse(cfg, H, t);
  r.energySlackness = std::abs(dual.lambdaBar * (energy - ebar)) / (g * g) / mse;
  r.powerSlackness = std::abs(dual.muBar * (power - cfg.powerBudget)) / (g * g) / mse;
  return r;
}

}  // namespace swipt::kkt
