// Compiled with -mavx2 -mfma on x86-64 only. One __m256d holds two
// interleaved complex doubles (re0, im0, re1, im1).
#include "gibc/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace gibc::kernels {
namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum_lanes02(__m256d v) {
  // v = (a0, a1, a2, a3) -> a0 + a2 and a1 + a3 packed in a __m128d
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(s);
}
inline double hsum_lanes13(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d acc_rr = _mm256_setzero_pd();  // (xr*yr, xi*yi, ...)
  __m256d acc_ri = _mm256_setzero_pd();  // (xr*yi, xi*yr, ...)
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(dp(x + i));
    __m256d yv = _mm256_loadu_pd(dp(y + i));
    __m256d ys = _mm256_permute_pd(yv, 0b0101);
    acc_rr = _mm256_fmadd_pd(xv, yv, acc_rr);
    acc_ri = _mm256_fmadd_pd(xv, ys, acc_ri);
  }
  double re = hsum_lanes02(acc_rr) + hsum_lanes13(acc_rr);
  double im = hsum_lanes02(acc_ri) - hsum_lanes13(acc_ri);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

cplx dotu_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d acc_rr = _mm256_setzero_pd();
  __m256d acc_ri = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(dp(x + i));
    __m256d yv = _mm256_loadu_pd(dp(y + i));
    __m256d ys = _mm256_permute_pd(yv, 0b0101);
    acc_rr = _mm256_fmadd_pd(xv, yv, acc_rr);
    acc_ri = _mm256_fmadd_pd(xv, ys, acc_ri);
  }
  double re = hsum_lanes02(acc_rr) - hsum_lanes13(acc_rr);
  double im = hsum_lanes02(acc_ri) + hsum_lanes13(acc_ri);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(dp(x + i));
    __m256d xs = _mm256_permute_pd(xv, 0b0101);  // (xi, xr, ...)
    __m256d yv = _mm256_loadu_pd(dp(y + i));
    // a*x = (ar*xr - ai*xi, ar*xi + ai*xr)
    __m256d t = _mm256_mul_pd(ai, xs);
    __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(yv, prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void gemv_avx2(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dotu_avx2(a + r * cols, x, cols);
}

cplx weighted_sum_avx2(const double* w, const cplx* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d wv = _mm256_set_pd(w[i + 1], w[i + 1], w[i], w[i]);
    acc = _mm256_fmadd_pd(wv, _mm256_loadu_pd(dp(v + i)), acc);
  }
  double re = hsum_lanes02(acc);
  double im = hsum_lanes13(acc);
  for (; i < n; ++i) {
    re += w[i] * v[i].real();
    im += w[i] * v[i].imag();
  }
  return {re, im};
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(dp(x + i));
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  double s = hsum_lanes02(acc) + hsum_lanes13(acc);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

const KernelTable kAvx2{Isa::avx2,     dotc_avx2,         dotu_avx2,   axpy_avx2,
                        gemv_avx2,     weighted_sum_avx2, norm_sq_avx2};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &kAvx2; }
}  // namespace detail

}  // namespace gibc::kernels

#else

namespace gibc::kernels::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace gibc::kernels::detail

#endif
