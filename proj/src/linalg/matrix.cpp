#include <algorithm>
#include <cmath>
#include <string>

#include "gibc/errors.hpp"
#include "gibc/kernels.hpp"
#include "gibc/linalg.hpp"
#include "lapack.hpp"

namespace gibc::linalg {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw InvalidInput("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                       std::to_string(rows * cols));
  }
  if (!all_finite()) throw InvalidInput("matrix has non-finite entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> v) {
  return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

Vector ComplexMatrix::col(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void ComplexMatrix::set_col(std::size_t c, std::span<const cplx> v) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
  return t;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix t = *this;
  for (auto& x : t.data_) x = std::conj(x);
  return t;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InvalidInput("block out of range");
  ComplexMatrix b(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    std::copy_n(data_.data() + (r0 + r) * cols_ + c0, nc, b.data_.data() + r * nc);
  return b;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw InvalidInput("block out of range");
  for (std::size_t r = 0; r < b.rows_; ++r)
    std::copy_n(b.data_.data() + r * b.cols_, b.cols_, data_.data() + (r0 + r) * cols_ + c0);
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  if (!square()) throw InvalidInput("hermitian part of a non-square matrix");
  ComplexMatrix h(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      h(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
  return h;
}

ComplexMatrix ComplexMatrix::antihermitian_part() const {
  if (!square()) throw InvalidInput("anti-hermitian part of a non-square matrix");
  ComplexMatrix h(rows_, cols_);
  const cplx half_over_i{0.0, -0.5};
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      h(r, c) = half_over_i * ((*this)(r, c) - std::conj((*this)(c, r)));
  return h;
}

double ComplexMatrix::frobenius_norm() const { return std::sqrt(kernels::norm_sq(data_)); }

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix sum dimension mismatch");
  kernels::axpy(1.0, o.data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix difference dimension mismatch");
  kernels::axpy(-1.0, o.data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx a) {
  for (auto& x : data_) x *= a;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

namespace {

ComplexMatrix gemm(const ComplexMatrix& a, CBLAS_TRANSPOSE ta, const ComplexMatrix& b) {
  const std::size_t m = ta == CblasNoTrans ? a.rows() : a.cols();
  const std::size_t k = ta == CblasNoTrans ? a.cols() : a.rows();
  if (k != b.rows()) throw InvalidInput("matrix product dimension mismatch");
  ComplexMatrix c(m, b.cols());
  if (m == 0 || b.cols() == 0 || k == 0) return c;
  const cplx one{1.0, 0.0};
  const cplx zero{0.0, 0.0};
  cblas_zgemm(CblasRowMajor, ta, CblasNoTrans, static_cast<int>(m), static_cast<int>(b.cols()),
              static_cast<int>(k), &one, a.data(), static_cast<int>(a.cols()), b.data(),
              static_cast<int>(b.cols()), &zero, c.data(), static_cast<int>(c.cols()));
  return c;
}

}  // namespace

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return gemm(a, CblasNoTrans, b);
}

ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b) {
  return gemm(a, CblasConjTrans, b);
}

Vector operator*(const ComplexMatrix& a, std::span<const cplx> x) {
  if (x.size() != a.cols()) throw InvalidInput("matrix-vector dimension mismatch");
  Vector y(a.rows());
  kernels::gemv(a.data(), a.rows(), a.cols(), x, y);
  return y;
}

ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("hstack row mismatch");
  ComplexMatrix c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

ComplexMatrix vstack(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.cols()) throw InvalidInput("vstack column mismatch");
  ComplexMatrix c(a.rows() + b.rows(), a.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), 0, b);
  return c;
}

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw InvalidInput("dot product length mismatch");
  return kernels::dotc(x, y);
}

double norm2(std::span<const cplx> x) { return std::sqrt(kernels::norm_sq(x)); }

}  // namespace gibc::linalg
