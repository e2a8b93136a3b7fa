#pragma once

#include <complex>
#include <random>

#include "gibc/linalg.hpp"

namespace testsupport {

using gibc::linalg::ComplexMatrix;
using gibc::linalg::cplx;
using gibc::linalg::Vector;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240517);
  return gen;
}

inline cplx random_cplx() {
  std::normal_distribution<double> d;
  return {d(rng()), d(rng())};
}

inline Vector random_vector(std::size_t n) {
  Vector v(n);
  for (auto& x : v) x = random_cplx();
  return v;
}

inline ComplexMatrix random_matrix(std::size_t r, std::size_t c) {
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_cplx();
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n) {
  ComplexMatrix a = random_matrix(n, n);
  return a.hermitian_part();
}

inline ComplexMatrix random_unitary(std::size_t n) {
  return gibc::linalg::svd(random_matrix(n, n)).u;
}

// Hermitian positive definite with condition number of order n.
inline ComplexMatrix random_hpd(std::size_t n) {
  ComplexMatrix a = random_matrix(n, n);
  ComplexMatrix g = gibc::linalg::adjoint_times(a, a);
  for (std::size_t i = 0; i < n; ++i) g(i, i) += static_cast<double>(n);
  return g.hermitian_part();
}

// Accretive: Hermitian part positive semidefinite, shifted by `shift`.
inline ComplexMatrix random_accretive(std::size_t n, double shift = 0.0) {
  ComplexMatrix b = random_matrix(n, n);
  ComplexMatrix h = gibc::linalg::adjoint_times(b, b);
  ComplexMatrix s = random_hermitian(n);
  ComplexMatrix z(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) z(i, j) = h(i, j) + cplx{0.0, 1.0} * s(i, j);
  for (std::size_t i = 0; i < n; ++i) z(i, i) += shift;
  return z;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).max_abs();
}

}  // namespace testsupport
