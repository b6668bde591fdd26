#include "swipt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swipt/errors.hpp"

namespace swipt::baselines {

CMatrix energy_beamformer(const SystemConfig& cfg, const CMatrix& G) {
  const auto top = linalg::top_eigen(G.adjoint() * G);
  CMatrix F = CMatrix::Zero(G.cols(), cfg.nStreams);
  F.col(0) = std::sqrt(cfg.powerBudget) * top.vector;
  return F;
}

UnconstrainedResult unconstrained_wmmse(const SystemConfig& cfg, const ChannelPair& ch,
                                        const alt::SolveOptions& opt) {
  alt::SolveOptions o = opt;
  o.enforceEnergy = false;
  o.maxIters = std::max(o.maxIters, kUnconstrainedIters);
  o.fixedIterations = true;
  const auto rep = alt::solve(cfg, ch, o);
  return {rep.best.precoder, rep.mse, rep.energy};
}

RegionEndpoints region_endpoints(const SystemConfig& cfg, const ChannelPair& ch,
                                 const alt::SolveOptions& opt) {
  RegionEndpoints ep;
  ep.eMax = max_energy(cfg, ch.G);
  const auto id = unconstrained_wmmse(cfg, ch, opt);
  ep.eID = id.eID;
  ep.mMin = id.mMin;
  ep.mEH = mmse_and_rate(cfg, ch.H, energy_beamformer(cfg, ch.G)).mse;
  return ep;
}

double rate_of_covariance(const CMatrix& H, const CMatrix& Q) {
  const auto n = H.rows();
  const CMatrix m = linalg::hermitian_part(CMatrix::Identity(n, n) + H * Q * H.adjoint());
  Eigen::LLT<CMatrix> llt(m);
  const CMatrix lower = llt.matrixL();
  double r = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) r += 2.0 * std::log2(lower(k, k).real());
  return r;
}

namespace {

// Eigen-structure of G^H G with eigenvalues in descending order.
struct EnergyBasis {
  RVector g;
  CMatrix V;
};

EnergyBasis energy_basis(const CMatrix& G) {
  auto e = linalg::eigh(G.adjoint() * G);
  const auto n = e.values.size();
  EnergyBasis b{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    b.g(k) = e.values(n - 1 - k);
    b.V.col(k) = e.vectors.col(n - 1 - k);
  }
  return b;
}

struct Inner {
  CMatrix Q;
  double power = 0.0;
  double energy = 0.0;
  double lagrangian = 0.0;  // max_Q ln|I + H Q H^H| - Tr(A Q), nats
};

class DualEvaluator {
 public:
  DualEvaluator(const CMatrix& H, const CMatrix& G) : H_(H), GG_(G.adjoint() * G), basis_(energy_basis(G)) {}

  // Maximizer of ln|I + H Q H^H| - Tr(A Q) for A = nu I - lambda G^H G,
  // nu = lambda g1 + s.
  Inner evaluate(double lambda, double s) const {
    const auto n = basis_.g.size();
    RVector ainvsqrt(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double a = lambda * (basis_.g(0) - basis_.g(k)) + s;
      ainvsqrt(k) = 1.0 / std::sqrt(a);
    }
    const CMatrix Ais = basis_.V * ainvsqrt.asDiagonal() * basis_.V.adjoint();
    const CMatrix Hw = H_ * Ais;
    auto e = linalg::eigh(Hw.adjoint() * Hw);
    RVector q(n);
    Inner out;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double sigma = e.values(k);
      q(k) = sigma > 1.0 ? 1.0 - 1.0 / sigma : 0.0;
      if (q(k) > 0.0) out.lagrangian += std::log(sigma) - q(k);
    }
    const CMatrix Qw = e.vectors * q.asDiagonal() * e.vectors.adjoint();
    out.Q = linalg::hermitian_part(Ais * Qw * Ais);
    out.power = linalg::trace_re(out.Q);
    out.energy = linalg::trace_re(GG_ * out.Q);
    return out;
  }

  // Smallest-power-above-budget search over s: returns the s on the
  // Tr(Q) <= P side of the budget.
  double solve_power(double lambda, double pt, double sMax) const {
    double hi = sMax;
    double lo = hi * 1e-4;
    while (evaluate(lambda, lo).power < pt && lo > 1e-290) lo *= 1e-4;
    for (int it = 0; it < 200; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (!(mid > lo && mid < hi) || hi / lo - 1.0 < 1e-15) break;
      if (evaluate(lambda, mid).power > pt) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return hi;
  }

  double g1() const { return basis_.g(0); }

 private:
  const CMatrix& H_;
  CMatrix GG_;
  EnergyBasis basis_;
};

}  // namespace

RateOracleResult rate_optimal_oracle(const SystemConfig& cfg, const CMatrix& H, const CMatrix& G,
                                     double eBar) {
  require(H.cols() == G.cols(), ErrorCode::DimensionMismatch, "H and G disagree on nTx");
  const double pt = cfg.powerBudget;
  const double emax = max_energy(cfg, G);
  if (eBar > emax) fail(ErrorCode::TargetUnattainable, "energy target exceeds P_T * g1");

  DualEvaluator dual(H, G);
  const double sMax = linalg::top_eigen(H.adjoint() * H).value * (1.0 + 1e-9) + 1e-300;

  double lambda = 0.0;
  double s = dual.solve_power(0.0, pt, sMax);
  Inner best = dual.evaluate(0.0, s);
  if (best.energy < eBar) {
    double lo = 0.0;
    double hi = 1.0 / (pt * dual.g1());
    double sHi = dual.solve_power(hi, pt, sMax);
    Inner atHi = dual.evaluate(hi, sHi);
    for (int k = 0; k < 2000 && atHi.energy < eBar; ++k) {
      lo = hi;
      hi *= 2.0;
      sHi = dual.solve_power(hi, pt, sMax);
      atHi = dual.evaluate(hi, sHi);
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi) || (hi - lo) <= 1e-14 * hi) break;
      const double sMid = dual.solve_power(mid, pt, sMax);
      Inner atMid = dual.evaluate(mid, sMid);
      if (atMid.energy >= eBar) {
        hi = mid;
        sHi = sMid;
        atHi = std::move(atMid);
      } else {
        lo = mid;
      }
    }
    lambda = hi;
    s = sHi;
    best = std::move(atHi);
  }

  RateOracleResult out;
  out.lambda = lambda;
  out.nu = lambda * dual.g1() + s;
  const double dualValue = best.lagrangian + out.nu * pt - lambda * eBar;
  out.Q = best.Q;
  if (best.power > 0.0) out.Q *= pt / best.power;
  out.rateBits = rate_of_covariance(H, out.Q);
  out.energy = linalg::trace_re(G.adjoint() * G * out.Q);
  out.dualityGapBits = dualValue / std::numbers::ln2 - out.rateBits;

  auto e = linalg::eigh(out.Q);
  const auto n = e.values.size();
  out.F = CMatrix::Zero(H.cols(), cfg.nStreams);
  for (int k = 0; k < cfg.nStreams && k < n; ++k) {
    out.F.col(k) = e.vectors.col(n - 1 - k) * std::sqrt(std::max(0.0, e.values(n - 1 - k)));
  }
  return out;
}

}  // namespace swipt::baselines
