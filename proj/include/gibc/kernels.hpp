#pragma once

// Data-parallel complex inner loops. Each kernel has a scalar reference
// implementation and SIMD variants (AVX2+FMA on x86-64, NEON on aarch64);
// the variant is chosen once at runtime from CPU features. Setting
// WORKBENCH_SIMD=scalar in the environment forces the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace gibc::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  // sum_i conj(x_i) * y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  // sum_i x_i * y_i
  cplx (*dotu)(const cplx* x, const cplx* y, std::size_t n);
  // y += a * x
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
  // sum_i w_i * v_i with real weights
  cplx (*weighted_sum)(const double* w, const cplx* v, std::size_t n);
  // sum_i |x_i|^2
  double (*norm_sq)(const cplx* x, std::size_t n);
};

bool isa_available(Isa isa);
const KernelTable& table_for(Isa isa);
const KernelTable& active();
std::string_view isa_name(Isa isa);

inline cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dotc(x.data(), y.data(), x.size());
}
inline cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dotu(x.data(), y.data(), x.size());
}
inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void gemv(const cplx* a, std::size_t rows, std::size_t cols, std::span<const cplx> x,
                 std::span<cplx> y) {
  active().gemv(a, rows, cols, x.data(), y.data());
}
inline cplx weighted_sum(std::span<const double> w, std::span<const cplx> v) {
  return active().weighted_sum(w.data(), v.data(), w.size());
}
inline double norm_sq(std::span<const cplx> x) { return active().norm_sq(x.data(), x.size()); }

namespace detail {
// Defined per translation unit; a variant that is not compiled for the
// current target returns nullptr.
const KernelTable* scalar_table();
const KernelTable* avx2_table();
const KernelTable* neon_table();
}  // namespace detail

}  // namespace gibc::kernels
