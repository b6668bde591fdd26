#include "table.hpp"

namespace swipt::kernels::detail {

namespace {

void apply_matrix_scalar(const double* ar, const double* ai, std::size_t rows, std::size_t cols,
                         ConstBatch x, Batch y, bool accumulate) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* yr = y.re + r * y.stride;
    double* yi = y.im + r * y.stride;
    for (std::size_t i = 0; i < x.count; ++i) {
      double accr = accumulate ? yr[i] : 0.0;
      double acci = accumulate ? yi[i] : 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        const double mr = ar[c * rows + r];
        const double mi = ai[c * rows + r];
        const double xr = x.re[c * x.stride + i];
        const double xi = x.im[c * x.stride + i];
        accr += mr * xr;
        accr -= mi * xi;
        acci += mr * xi;
        acci += mi * xr;
      }
      yr[i] = accr;
      yi[i] = acci;
    }
  }
}

void quadratic_forms_scalar(const double* mr, const double* mi, std::size_t n, ConstBatch x,
                            double* out) {
  for (std::size_t i = 0; i < x.count; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double xrj = x.re[j * x.stride + i];
      const double xij = x.im[j * x.stride + i];
      acc += mr[j * n + j] * (xrj * xrj + xij * xij);
      double off = 0.0;
      for (std::size_t k = j + 1; k < n; ++k) {
        const double ar = mr[k * n + j];
        const double ai = mi[k * n + j];
        const double xrk = x.re[k * x.stride + i];
        const double xik = x.im[k * x.stride + i];
        const double tr = ar * xrk - ai * xik;
        const double ti = ar * xik + ai * xrk;
        off += xrj * tr + xij * ti;
      }
      acc += 2.0 * off;
    }
    out[i] = acc;
  }
}

std::uint64_t count_sign_mismatches_scalar(const double* a, const double* b, std::size_t n) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (a[i] < 0.0) != (b[i] < 0.0);
  return count;
}

}  // namespace

const KernelTable kScalarTable{apply_matrix_scalar, quadratic_forms_scalar,
                               count_sign_mismatches_scalar};

}  // namespace swipt::kernels::detail
