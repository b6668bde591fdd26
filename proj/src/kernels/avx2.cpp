#include <immintrin.h>

#include "table.hpp"

namespace swipt::kernels::detail {

namespace {

void apply_matrix_avx2(const double* ar, const double* ai, std::size_t rows, std::size_t cols,
                       ConstBatch x, Batch y, bool accumulate) {
  const std::size_t n4 = x.count & ~std::size_t{3};
  for (std::size_t r = 0; r < rows; ++r) {
    double* yr = y.re + r * y.stride;
    double* yi = y.im + r * y.stride;
    std::size_t i = 0;
    for (; i < n4; i += 4) {
      __m256d accr = accumulate ? _mm256_loadu_pd(yr + i) : _mm256_setzero_pd();
      __m256d acci = accumulate ? _mm256_loadu_pd(yi + i) : _mm256_setzero_pd();
      for (std::size_t c = 0; c < cols; ++c) {
        const __m256d mr = _mm256_set1_pd(ar[c * rows + r]);
        const __m256d mi = _mm256_set1_pd(ai[c * rows + r]);
        const __m256d xr = _mm256_loadu_pd(x.re + c * x.stride + i);
        const __m256d xi = _mm256_loadu_pd(x.im + c * x.stride + i);
        accr = _mm256_fmadd_pd(mr, xr, accr);
        accr = _mm256_fnmadd_pd(mi, xi, accr);
        acci = _mm256_fmadd_pd(mr, xi, acci);
        acci = _mm256_fmadd_pd(mi, xr, acci);
      }
      _mm256_storeu_pd(yr + i, accr);
      _mm256_storeu_pd(yi + i, acci);
    }
    for (; i < x.count; ++i) {
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

void quadratic_forms_avx2(const double* mr, const double* mi, std::size_t n, ConstBatch x,
                          double* out) {
  const std::size_t n4 = x.count & ~std::size_t{3};
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n; ++j) {
      const __m256d xrj = _mm256_loadu_pd(x.re + j * x.stride + i);
      const __m256d xij = _mm256_loadu_pd(x.im + j * x.stride + i);
      const __m256d mag = _mm256_fmadd_pd(xij, xij, _mm256_mul_pd(xrj, xrj));
      acc = _mm256_fmadd_pd(_mm256_set1_pd(mr[j * n + j]), mag, acc);
      __m256d off = _mm256_setzero_pd();
      for (std::size_t k = j + 1; k < n; ++k) {
        const __m256d ar = _mm256_set1_pd(mr[k * n + j]);
        const __m256d ai = _mm256_set1_pd(mi[k * n + j]);
        const __m256d xrk = _mm256_loadu_pd(x.re + k * x.stride + i);
        const __m256d xik = _mm256_loadu_pd(x.im + k * x.stride + i);
        const __m256d tr = _mm256_fnmadd_pd(ai, xik, _mm256_mul_pd(ar, xrk));
        const __m256d ti = _mm256_fmadd_pd(ai, xrk, _mm256_mul_pd(ar, xik));
        off = _mm256_fmadd_pd(xrj, tr, off);
        off = _mm256_fmadd_pd(xij, ti, off);
      }
      acc = _mm256_fmadd_pd(two, off, acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  if (i < x.count) {
    ConstBatch tail = x;
    tail.re += i;
    tail.im += i;
    tail.count = x.count - i;
    kScalarTable.quadratic_forms(mr, mi, n, tail, out + i);
  }
}

std::uint64_t count_sign_mismatches_avx2(const double* a, const double* b, std::size_t n) {
  const std::size_t n4 = n & ~std::size_t{3};
  const __m256d zero = _mm256_setzero_pd();
  std::uint64_t count = 0;
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d na = _mm256_cmp_pd(_mm256_loadu_pd(a + i), zero, _CMP_LT_OQ);
    const __m256d nb = _mm256_cmp_pd(_mm256_loadu_pd(b + i), zero, _CMP_LT_OQ);
    const int mask = _mm256_movemask_pd(_mm256_xor_pd(na, nb));
    count += static_cast<std::uint64_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  return count + kScalarTable.count_sign_mismatches(a + i, b + i, n - i);
}

}  // namespace

const KernelTable kAvx2Table{apply_matrix_avx2, quadratic_forms_avx2, count_sign_mismatches_avx2};

}  // namespace swipt::kernels::detail
