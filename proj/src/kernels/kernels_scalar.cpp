#include "gibc/kernels.hpp"

namespace gibc::kernels {
namespace {

cplx dotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

cplx dotu_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void gemv_scalar(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dotu_scalar(a + r * cols, x, cols);
}

cplx weighted_sum_scalar(const double* w, const cplx* v, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += w[i] * v[i].real();
    im += w[i] * v[i].imag();
  }
  return {re, im};
}

double norm_sq_scalar(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

const KernelTable kScalar{Isa::scalar,       dotc_scalar,         dotu_scalar, axpy_scalar,
                          gemv_scalar,       weighted_sum_scalar, norm_sq_scalar};

}  // namespace

namespace detail {
const KernelTable* scalar_table() { return &kScalar; }
}  // namespace detail

}  // namespace gibc::kernels
