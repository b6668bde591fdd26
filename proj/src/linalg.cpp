#include "swipt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "swipt/errors.hpp"

namespace swipt::linalg {

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

double trace_re(const CMatrix& a) { return a.trace().real(); }

double inner_re(const CMatrix& a, const CMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

HermitianEig eigh(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
  return {es.eigenvalues(), es.eigenvectors()};
}

TopEigen top_eigen(const CMatrix& a) {
  auto e = eigh(a);
  const auto n = e.values.size();
  CVector v = e.vectors.col(n - 1);
  normalize_phase(v);
  return {e.values(n - 1), v};
}

CMatrix solve_hpd(const CMatrix& a, const CMatrix& b) {
  Eigen::LLT<CMatrix> llt(hermitian_part(a));
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::InfeasibleDual, "matrix is not positive definite");
  }
  return llt.solve(b);
}

void normalize_phase(CVector& v) {
  if (v.size() == 0) return;
  Eigen::Index idx = 0;
  v.cwiseAbs2().maxCoeff(&idx);
  const double mag = std::abs(v(idx));
  if (mag == 0.0) return;
  v *= std::conj(v(idx)) / mag;
  v(idx) = Complex(std::abs(v(idx)), 0.0);
}

void normalize_phase_columns(CMatrix& f) {
  for (Eigen::Index j = 0; j < f.cols(); ++j) {
    CVector c = f.col(j);
    Eigen::Index idx = 0;
    const double m = c.cwiseAbs2().maxCoeff(&idx);
    if (m == 0.0) continue;
    const Complex rot = std::conj(c(idx)) / std::sqrt(m);
    f *= rot;
    return;
  }
}

double power_chordal_distance(const CMatrix& f, const CVector& v) {
  const double total = f.squaredNorm();
  if (total == 0.0) return 1.0;
  const double vn = v.squaredNorm();
  const double along = (v.adjoint() * f).squaredNorm() / vn;
  return std::sqrt(std::clamp(1.0 - along / total, 0.0, 1.0));
}

double hermitian_norm2(const CMatrix& a) {
  auto e = eigh(a);
  return std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
}

}  // namespace swipt::linalg
