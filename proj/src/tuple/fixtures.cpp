#include "gibc/fixtures.hpp"

#include <cmath>
#include <numbers>

#include "gibc/errors.hpp"
#include "gibc/quadrature.hpp"

namespace gibc::fixtures {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::GramMatrix;

namespace {

struct Grid {
  std::vector<double> x;
  ComplexMatrix d;
  GramMatrix mass;
};

Grid make_grid(std::size_t n) {
  if (n < 4) throw InvalidInput("collocation fixtures need at least 4 points");
  Grid g;
  g.x = quad::chebyshev_lobatto(n, 0.0, 1.0);
  const auto w = quad::chebyshev_bary_weights(n);
  g.d = quad::differentiation_matrix(g.x, w);
  g.mass = GramMatrix(quad::lagrange_mass_matrix(g.x, w, 0.0, 1.0));
  return g;
}

ComplexMatrix point_row(std::size_t n, std::size_t j) {
  ComplexMatrix r(1, n);
  r(0, j) = 1.0;
  return r;
}

}  // namespace

CollocationFixture transport(std::size_t n) {
  Grid g = make_grid(n);
  const double s = 1.0 / std::numbers::sqrt2;
  ComplexMatrix g0(1, n), g1(1, n);
  g0(0, 0) = s;
  g0(0, n - 1) = s;
  g1(0, 0) = cplx{0.0, -s};
  g1(0, n - 1) = cplx{0.0, s};
  CollocationFixture f;
  f.model = {cplx{0.0, 1.0} * g.d, g.mass, "transport-" + std::to_string(n)};
  f.tuple = tuple::trivial_tuple(std::move(g0), std::move(g1));
  f.tolerance = 1e-8;
  f.notes = "H = C^1; deficiency indices (1,1) are represented exactly, unboundedness of A* is not";
  f.nodes = std::move(g.x);
  return f;
}

CollocationFixture sturm(std::size_t n) {
  Grid g = make_grid(n);
  ComplexMatrix g0 = linalg::vstack(point_row(n, 0), point_row(n, n - 1));
  ComplexMatrix g1 = linalg::vstack(g.d.block(0, 0, 1, n), -1.0 * g.d.block(n - 1, 0, 1, n));
  CollocationFixture f;
  f.model = {-1.0 * (g.d * g.d), g.mass, "sturm-" + std::to_string(n)};
  f.tuple = tuple::trivial_tuple(std::move(g0), std::move(g1));
  // Second derivatives amplify rounding by roughly n^4.
  f.tolerance = 1e-8;
  f.notes = "H = C^2 (both endpoints); second-order collocation";
  f.nodes = std::move(g.x);
  return f;
}

CollocationFixture rigged_sturm(std::size_t n) {
  CollocationFixture f = sturm(n);
  const std::vector<double> w{2.0, 0.5};
  const std::vector<double> winv{0.5, 2.0};
  f.tuple.gamma0 = ComplexMatrix::diagonal(std::span<const double>(w)) * f.tuple.gamma0;
  f.tuple.pairing = ComplexMatrix::diagonal(std::span<const double>(winv));
  f.tuple.gram_minus = GramMatrix::diagonal(std::vector<double>{4.0, 0.25});
  f.tuple.gram_pivot = GramMatrix::diagonal(std::vector<double>{1.0, 1.0});
  f.tuple.gram_plus = GramMatrix::diagonal(std::vector<double>{0.25, 4.0});
  f.model.label = "rigged-sturm-" + std::to_string(n);
  f.notes = "sturm traces in weighted coordinates; pairing diag(1/w) keeps the Green identity";
  return f;
}

CollocationFixture by_name(const std::string& name) {
  const auto dash = name.find_last_of('-');
  if (dash == std::string::npos || dash + 1 >= name.size())
    throw InvalidInput("unknown fixture '" + name + "'");
  const std::string kind = name.substr(0, dash);
  std::size_t n = 0;
  try {
    std::size_t used = 0;
    n = std::stoul(name.substr(dash + 1), &used);
    if (used != name.size() - dash - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InvalidInput("fixture size in '" + name + "' is not a number");
  }
  if (n < 4 || n > 512) throw InvalidInput("fixture size must be between 4 and 512");
  if (kind == "transport") return transport(n);
  if (kind == "sturm") return sturm(n);
  if (kind == "rigged-sturm") return rigged_sturm(n);
  throw InvalidInput("unknown fixture '" + name + "'");
}

std::vector<std::string> default_names() { return {"transport-64", "sturm-32", "rigged-sturm-32"}; }

tuple::Vector random_smooth_state(const std::vector<double>& nodes, std::mt19937_64& rng) {
  // Non-periodic on purpose: the boundary terms must not cancel.
  std::normal_distribution<double> d;
  std::uniform_real_distribution<double> freq(-12.0, 12.0);
  constexpr int kModes = 6;
  std::vector<cplx> c(kModes);
  std::vector<double> w(kModes);
  for (int k = 0; k < kModes; ++k) {
    c[k] = cplx{d(rng), d(rng)};
    w[k] = freq(rng);
  }
  tuple::Vector f(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    cplx s{};
    for (int k = 0; k < kModes; ++k) s += c[k] * std::polar(1.0, w[k] * nodes[j]);
    f[j] = s;
  }
  return f;
}

}  // namespace gibc::fixtures
