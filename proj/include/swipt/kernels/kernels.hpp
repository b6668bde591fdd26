#pragma once

// Data-parallel inner loops of the Monte-Carlo experiments. Each kernel has
// a scalar reference implementation and an AVX2/FMA variant; the active
// variant is chosen at first use from the CPU's capabilities and can be
// overridden with set_isa() or the SWIPT_ISA environment variable
// ("scalar" or "avx2").
//
// Batches use split-complex storage: component k of sample i lives at
// re[k * stride + i] and im[k * stride + i].

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "swipt/linalg.hpp"

namespace swipt::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);
bool isa_supported(Isa isa);
Isa best_isa();
Isa active_isa();
/// Throws Error{InvalidArgument} if the ISA is not available on this CPU.
void set_isa(Isa isa);

struct ConstBatch {
  const double* re = nullptr;
  const double* im = nullptr;
  std::size_t rows = 0;
  std::size_t count = 0;
  std::size_t stride = 0;
};

struct Batch {
  double* re = nullptr;
  double* im = nullptr;
  std::size_t rows = 0;
  std::size_t count = 0;
  std::size_t stride = 0;
};

class SplitBatch {
 public:
  SplitBatch() = default;
  SplitBatch(std::size_t rows, std::size_t count)
      : rows_(rows), count_(count), re_(rows * count, 0.0), im_(rows * count, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t count() const { return count_; }
  Complex get(std::size_t k, std::size_t i) const {
    return {re_[k * count_ + i], im_[k * count_ + i]};
  }
  void set(std::size_t k, std::size_t i, Complex v) {
    re_[k * count_ + i] = v.real();
    im_[k * count_ + i] = v.imag();
  }
  std::span<double> re() { return re_; }
  std::span<double> im() { return im_; }
  std::span<const double> re() const { return re_; }
  std::span<const double> im() const { return im_; }

  ConstBatch view() const { return {re_.data(), im_.data(), rows_, count_, count_}; }
  Batch view() { return {re_.data(), im_.data(), rows_, count_, count_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t count_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

/// y_i = A x_i for every sample (or y_i += A x_i when accumulate is set).
/// A is y.rows x x.rows; x and y must not alias.
void apply_matrix(const CMatrix& A, ConstBatch x, Batch y, bool accumulate);

/// out_i = Re(x_i^H M x_i) for Hermitian M (the upper triangle is read).
void quadratic_forms(const CMatrix& M, ConstBatch x, std::span<double> out);

/// Number of indices with (a_i < 0) != (b_i < 0). Slicing Gray-mapped 4QAM
/// reduces to this per real and imaginary rail.
std::uint64_t count_sign_mismatches(std::span<const double> a, std::span<const double> b);

}  // namespace swipt::kernels
