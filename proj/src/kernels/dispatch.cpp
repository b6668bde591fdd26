#include <atomic>
#include <cstdlib>
#include <string>

#include "swipt/errors.hpp"
#include "table.hpp"

namespace swipt::kernels {

namespace {

const detail::KernelTable* table_for(Isa isa) {
#if defined(SWIPT_HAVE_AVX2)
  if (isa == Isa::Avx2) return &detail::kAvx2Table;
#endif
  (void)isa;
  return &detail::kScalarTable;
}

Isa initial_isa() {
  if (const char* env = std::getenv("SWIPT_ISA")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_supported(Isa::Avx2)) return Isa::Avx2;
  }
  return best_isa();
}

std::atomic<int>& active_slot() {
  static std::atomic<int> slot{static_cast<int>(initial_isa())};
  return slot;
}

const detail::KernelTable& active() { return *table_for(active_isa()); }

struct SplitMatrix {
  explicit SplitMatrix(const CMatrix& m) : re(m.real()), im(m.imag()) {}
  RMatrix re;
  RMatrix im;
};

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(SWIPT_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa best_isa() { return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return static_cast<Isa>(active_slot().load()); }

void set_isa(Isa isa) {
  require(isa_supported(isa), ErrorCode::InvalidArgument, "requested ISA is not available");
  active_slot().store(static_cast<int>(isa));
}

void apply_matrix(const CMatrix& A, ConstBatch x, Batch y, bool accumulate) {
  require(static_cast<std::size_t>(A.cols()) == x.rows &&
              static_cast<std::size_t>(A.rows()) == y.rows && x.count == y.count,
          ErrorCode::DimensionMismatch, "apply_matrix: shapes do not conform");
  const SplitMatrix m(A);
  active().apply_matrix(m.re.data(), m.im.data(), A.rows(), A.cols(), x, y, accumulate);
}

void quadratic_forms(const CMatrix& M, ConstBatch x, std::span<double> out) {
  require(M.rows() == M.cols() && static_cast<std::size_t>(M.rows()) == x.rows &&
              out.size() == x.count,
          ErrorCode::DimensionMismatch, "quadratic_forms: shapes do not conform");
  const SplitMatrix m(M);
  active().quadratic_forms(m.re.data(), m.im.data(), M.rows(), x, out.data());
}

std::uint64_t count_sign_mismatches(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch,
          "count_sign_mismatches: length mismatch");
  return active().count_sign_mismatches(a.data(), b.data(), a.size());
}

}  // namespace swipt::kernels
