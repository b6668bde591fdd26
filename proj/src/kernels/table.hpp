#pragma once

#include <cstdint>

#include "swipt/kernels/kernels.hpp"

namespace swipt::kernels::detail {

// Matrices are passed as split real/imag column-major arrays.
struct KernelTable {
  void (*apply_matrix)(const double* ar, const double* ai, std::size_t rows, std::size_t cols,
                       ConstBatch x, Batch y, bool accumulate);
  void (*quadratic_forms)(const double* mr, const double* mi, std::size_t n, ConstBatch x,
                          double* out);
  std::uint64_t (*count_sign_mismatches)(const double* a, const double* b, std::size_t n);
};

extern const KernelTable kScalarTable;
#if defined(SWIPT_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace swipt::kernels::detail
