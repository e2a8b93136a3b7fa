#include "gibc/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "gibc/errors.hpp"

namespace gibc::quad {

Rule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw InvalidInput("Gauss-Legendre rule needs at least one node");
  Rule r{std::vector<double>(n), std::vector<double>(n)};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = mid - half * x;
    r.nodes[n - 1 - i] = mid + half * x;
    r.weights[i] = r.weights[n - 1 - i] = half * w;
  }
  return r;
}

std::vector<double> chebyshev_lobatto(std::size_t n, double a, double b) {
  if (n < 2) throw InvalidInput("Chebyshev-Lobatto grid needs at least two points");
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(j) /
                                           static_cast<double>(n - 1)));
    x[j] = a + (b - a) * t;
  }
  x.front() = a;
  x.back() = b;
  return x;
}

std::vector<double> chebyshev_bary_weights(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = (j % 2 == 0) ? 1.0 : -1.0;
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

linalg::ComplexMatrix lagrange_matrix(const std::vector<double>& nodes,
                                      const std::vector<double>& bary, const std::vector<double>& x) {
  const std::size_t n = nodes.size();
  linalg::ComplexMatrix l(x.size(), n);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::size_t hit = n;
    for (std::size_t j = 0; j < n; ++j)
      if (x[i] == nodes[j]) hit = j;
    if (hit < n) {
      l(i, hit) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) denom += bary[j] / (x[i] - nodes[j]);
    for (std::size_t j = 0; j < n; ++j) l(i, j) = bary[j] / (x[i] - nodes[j]) / denom;
  }
  return l;
}

linalg::ComplexMatrix differentiation_matrix(const std::vector<double>& nodes,
                                             const std::vector<double>& bary) {
  const std::size_t n = nodes.size();
  linalg::ComplexMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
      d(i, j) = v;
      diag -= v;
    }
    d(i, i) = diag;
  }
  return d;
}

linalg::ComplexMatrix lagrange_mass_matrix(const std::vector<double>& nodes,
                                           const std::vector<double>& bary, double a, double b) {
  // The product of two basis polynomials has degree 2n-2; n+2 Gauss points
  // integrate it exactly.
  const Rule r = gauss_legendre(nodes.size() + 2, a, b);
  const linalg::ComplexMatrix l = lagrange_matrix(nodes, bary, r.nodes);
  linalg::ComplexMatrix wl = l;
  for (std::size_t i = 0; i < wl.rows(); ++i)
    for (std::size_t j = 0; j < wl.cols(); ++j) wl(i, j) *= r.weights[i];
  return linalg::adjoint_times(l, wl).hermitian_part();
}

}  // namespace gibc::quad
