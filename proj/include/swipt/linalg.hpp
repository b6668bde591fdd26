#pragma once

// Dense complex linear-algebra helpers shared by the solver modules.
// All matrices here are small (a handful of antennas), so everything is
// dense and column-major Eigen storage.

#include <complex>

#include <Eigen/Dense>

namespace swipt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

namespace linalg {

/// (A + A^H) / 2.
CMatrix hermitian_part(const CMatrix& a);

/// Real part of the trace.
double trace_re(const CMatrix& a);

/// Tr(A^H B) real part, i.e. the Frobenius inner product.
double inner_re(const CMatrix& a, const CMatrix& b);

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
struct HermitianEig {
  RVector values;
  CMatrix vectors;
};
HermitianEig eigh(const CMatrix& a);

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
struct TopEigen {
  double value = 0.0;
  CVector vector;
};
TopEigen top_eigen(const CMatrix& a);

/// Solve A X = B for Hermitian positive-definite A (Cholesky). Throws
/// Error{InfeasibleDual} if the factorization breaks down.
CMatrix solve_hpd(const CMatrix& a, const CMatrix& b);

/// Rotate v so that its largest-magnitude entry is real and nonnegative.
void normalize_phase(CVector& v);

/// Rotate every column of F by one common phase so the largest-magnitude
/// entry of the first nonzero column is real and nonnegative.
void normalize_phase_columns(CMatrix& f);

/// Projection distance between span(F) weighted by F's power and span(v):
/// sqrt(1 - ||v^H F||^2 / ||F||_F^2). In [0, 1]; zero iff every column of F
/// lies on v. v need not be normalized.
double power_chordal_distance(const CMatrix& f, const CVector& v);

/// Spectral norm of a Hermitian matrix (max |eigenvalue|).
double hermitian_norm2(const CMatrix& a);

}  // namespace linalg
}  // namespace swipt
