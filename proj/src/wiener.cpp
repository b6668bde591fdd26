#include "swipt/wiener.hpp"

#include "swipt/errors.hpp"

namespace swipt::wiener {

CMatrix wiener_receiver(const CMatrix& H, const CMatrix& F, double gamma) {
  require(gamma > 0.0, ErrorCode::InvalidArgument, "gamma must be positive");
  require(H.cols() == F.rows(), ErrorCode::DimensionMismatch, "H and F do not conform");
  const CMatrix hf = H * F;
  const auto nid = H.rows();
  const CMatrix gram = linalg::hermitian_part(hf * hf.adjoint()) + CMatrix::Identity(nid, nid);
  // L = gamma (gram^-1 H F)^H since gram is Hermitian.
  Eigen::LLT<CMatrix> llt(gram);
  return gamma * llt.solve(hf).adjoint();
}

double optimal_gamma(const SystemConfig& cfg, const CMatrix& H, const CMatrix& F,
                     const CMatrix& L) {
  const CMatrix lhf = L * H * F;
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index k = 0; k < cfg.weights.size(); ++k) {
    num += cfg.weights(k) * (lhf.row(k).squaredNorm() + L.row(k).squaredNorm());
    den += cfg.weights(k) * lhf(k, k).real();
  }
  if (!(den > 0.0)) fail(ErrorCode::NoPositiveScale, "Tr(Re(W L H F)) is not positive");
  return num / den;
}

}  // namespace swipt::wiener
