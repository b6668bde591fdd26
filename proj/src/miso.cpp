#include "swipt/miso.hpp"

#include <cmath>
#include <limits>

#include "swipt/baselines.hpp"
#include "swipt/errors.hpp"
#include "swipt/kkt_precoder.hpp"

namespace swipt::miso {

namespace {

void check_miso(const SystemConfig& cfg, const CVector& h, const CMatrix& G) {
  require(cfg.nStreams == 1 && cfg.nId == 1, ErrorCode::InvalidArgument,
          "MISO beamforming needs one stream and one ID antenna");
  require(h.size() == cfg.nTx && G.cols() == cfg.nTx, ErrorCode::DimensionMismatch,
          "h and G must have nTx columns");
}

kkt::PrecoderAux miso_aux(const SystemConfig& cfg, const CVector& h, const CMatrix& G,
                          const CVector& rhs) {
  const auto nt = h.size();
  const CMatrix I = CMatrix::Identity(nt, nt);
  kkt::PrecoderAux aux;
  aux.powerBudget = cfg.powerBudget;
  aux.targetEnergy = cfg.targetEnergy;
  aux.trWLL = 1.0;
  aux.Y = linalg::hermitian_part(h * h.adjoint() + I / cfg.powerBudget);
  aux.Z = linalg::hermitian_part(G.adjoint() * G - (cfg.targetEnergy / cfg.powerBudget) * I);
  aux.rhs = rhs;
  return aux;
}

// lambdaBar by the J(0) >= 0 rule. At lambdaBar = 0 the beamformer is the
// matched filter, so J(0) has the sign of h^H Z h.
// atBound marks the degenerate root at 1/zeta, where the beamformer comes
// from the secular form rather than from A^-1 h.
kkt::DualRoot dual_root(const SystemConfig& cfg, const kkt::SecularForm& sec, const kkt::PrecoderAux& aux,
                        const CVector& h) {
  const double e0 = cfg.powerBudget * linalg::inner_re(h, aux.Z * h) / h.squaredNorm();
  if (e0 >= -kkt::energy_tolerance(cfg.targetEnergy)) return {};
  if (!(sec.kappa() > 0.0)) fail(ErrorCode::TargetUnattainable, "energy target cannot be met");
  return kkt::find_dual_root(sec);
}

}  // namespace

double snr(const CVector& h, const CVector& f) { return std::norm(h.dot(f)); }

BeamformerResult solve_miso(const SystemConfig& cfg, const CVector& h, const CMatrix& G) {
  check_miso(cfg, h, G);
  const double pt = cfg.powerBudget;
  const double emax = max_energy(cfg, G);
  if (cfg.targetEnergy > emax) fail(ErrorCode::TargetUnattainable, "energy target exceeds P_T * g1");

  BeamformerResult out;
  if (cfg.targetEnergy >= emax * (1.0 - kkt::kFeasibilityMargin)) {
    out.f = baselines::energy_beamformer(cfg, G).col(0);
    out.lambdaBar = std::numeric_limits<double>::infinity();
    out.zeta = std::numeric_limits<double>::quiet_NaN();
    out.mse = 1.0 / (1.0 + snr(h, out.f));
    out.endpoint = true;
    return out;
  }

  const auto aux = miso_aux(cfg, h, G, h);
  const auto sec = kkt::secular_form(aux);
  out.zeta = sec.kappa();
  const auto root = dual_root(cfg, sec, aux, h);
  out.lambdaBar = root.lambdaBar;
  if (root.atBound) {
    out.f = sec.precoder_at_bound().col(0);
    out.f *= std::sqrt(pt / out.f.squaredNorm());
    linalg::normalize_phase(out.f);
    out.mse = 1.0 / (1.0 + snr(h, out.f));
    return out;
  }

  const auto nt = h.size();
  const CMatrix A = CMatrix::Identity(nt, nt) / pt - out.lambdaBar * aux.Z;
  const CVector u = A.partialPivLu().solve(h);
  const double s = h.dot(u).real();
  CVector fbar = u / (1.0 + s);
  out.f = std::sqrt(pt / fbar.squaredNorm()) * fbar;
  linalg::normalize_phase(out.f);
  out.mse = 1.0 / (1.0 + s);
  return out;
}

CVector beamformer_with_receiver(const SystemConfig& cfg, const CVector& h, const CMatrix& G,
                                 Complex l) {
  check_miso(cfg, h, G);
  require(std::abs(l) > 0.0, ErrorCode::InvalidArgument, "receiver scalar must be nonzero");
  const auto aux = miso_aux(cfg, h, G, h / l);
  const auto sec = kkt::secular_form(aux);
  const auto root = dual_root(cfg, sec, aux, h);
  CVector f = root.atBound ? CVector(sec.precoder_at_bound().col(0))
                           : CVector(kkt::precoder_unscaled(aux, root.lambdaBar));
  f *= std::sqrt(cfg.powerBudget / f.squaredNorm());
  linalg::normalize_phase(f);
  return f;
}

double crosscheck_general(const SystemConfig& cfg, const CVector& h, const CMatrix& G,
                          const alt::SolveOptions& opt) {
  const auto bf = solve_miso(cfg, h, G);
  ChannelPair ch;
  ch.H = h.adjoint();
  ch.G = G;
  SystemConfig general = cfg;
  general.weights = RVector::Ones(1);
  const auto rep = alt::solve(general, ch, opt);
  return std::abs(rep.mse - bf.mse);
}

}  // namespace swipt::miso
