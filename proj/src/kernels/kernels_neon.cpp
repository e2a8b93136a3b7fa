// aarch64 only. One float64x2_t holds one complex double (re, im).
#include "gibc/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace gibc::kernels {
namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

cplx dotc_neon(const cplx* x, const cplx* y, std::size_t n) {
  float64x2_t acc_rr = vdupq_n_f64(0.0);  // (xr*yr, xi*yi)
  float64x2_t acc_ri = vdupq_n_f64(0.0);  // (xr*yi, xi*yr)
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t xv = vld1q_f64(dp(x + i));
    float64x2_t yv = vld1q_f64(dp(y + i));
    acc_rr = vfmaq_f64(acc_rr, xv, yv);
    acc_ri = vfmaq_f64(acc_ri, xv, vextq_f64(yv, yv, 1));
  }
  return {vgetq_lane_f64(acc_rr, 0) + vgetq_lane_f64(acc_rr, 1),
          vgetq_lane_f64(acc_ri, 0) - vgetq_lane_f64(acc_ri, 1)};
}

cplx dotu_neon(const cplx* x, const cplx* y, std::size_t n) {
  float64x2_t acc_rr = vdupq_n_f64(0.0);
  float64x2_t acc_ri = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t xv = vld1q_f64(dp(x + i));
    float64x2_t yv = vld1q_f64(dp(y + i));
    acc_rr = vfmaq_f64(acc_rr, xv, yv);
    acc_ri = vfmaq_f64(acc_ri, xv, vextq_f64(yv, yv, 1));
  }
  return {vgetq_lane_f64(acc_rr, 0) - vgetq_lane_f64(acc_rr, 1),
          vgetq_lane_f64(acc_ri, 0) + vgetq_lane_f64(acc_ri, 1)};
}

void axpy_neon(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const float64x2_t ar = vdupq_n_f64(a.real());
  const float64x2_t ai = {-a.imag(), a.imag()};
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t xv = vld1q_f64(dp(x + i));
    float64x2_t yv = vld1q_f64(dp(y + i));
    yv = vfmaq_f64(yv, ar, xv);
    yv = vfmaq_f64(yv, ai, vextq_f64(xv, xv, 1));
    vst1q_f64(dp(y + i), yv);
  }
}

void gemv_neon(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dotu_neon(a + r * cols, x, cols);
}

cplx weighted_sum_neon(const double* w, const cplx* v, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) acc = vfmaq_n_f64(acc, vld1q_f64(dp(v + i)), w[i]);
  return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

double norm_sq_neon(const cplx* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t xv = vld1q_f64(dp(x + i));
    acc = vfmaq_f64(acc, xv, xv);
  }
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

const KernelTable kNeon{Isa::neon,     dotc_neon,         dotu_neon,   axpy_neon,
                        gemv_neon,     weighted_sum_neon, norm_sq_neon};

}  // namespace

namespace detail {
const KernelTable* neon_table() { return &kNeon; }
}  // namespace detail

}  // namespace gibc::kernels

#else

namespace gibc::kernels::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace gibc::kernels::detail

#endif
