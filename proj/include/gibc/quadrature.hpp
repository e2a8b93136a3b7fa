#pragma once

// Quadrature rules and polynomial collocation on intervals.

#include <cstddef>
#include <vector>

#include "gibc/linalg.hpp"

namespace gibc::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

// Chebyshev-Lobatto points (1 - cos(pi j / (n-1)))/2 mapped to [a, b], ascending.
std::vector<double> chebyshev_lobatto(std::size_t n, double a = 0.0, double b = 1.0);

// Barycentric weights for Chebyshev-Lobatto points in ascending order.
std::vector<double> chebyshev_bary_weights(std::size_t n);

// Row i holds the Lagrange basis of `nodes` evaluated at x[i].
linalg::ComplexMatrix lagrange_matrix(const std::vector<double>& nodes,
                                      const std::vector<double>& bary, const std::vector<double>& x);

// Differentiation matrix of the polynomial interpolant through `nodes`.
linalg::ComplexMatrix differentiation_matrix(const std::vector<double>& nodes,
                                             const std::vector<double>& bary);

// Exact L2(a, b) mass matrix of the Lagrange basis.
linalg::ComplexMatrix lagrange_mass_matrix(const std::vector<double>& nodes,
                                           const std::vector<double>& bary, double a, double b);

}  // namespace gibc::quad
