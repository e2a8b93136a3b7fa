#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gibc/boundary_tuple.hpp"
#include "gibc/errors.hpp"
#include "gibc/fixtures.hpp"
#include "support.hpp"

using namespace gibc;
using namespace gibc::tuple;
using testsupport::random_cplx;
using testsupport::random_matrix;
using testsupport::random_vector;
using testsupport::rng;

namespace {

double rel_defect(const fixtures::CollocationFixture& fx, const Vector& f, const Vector& g) {
  return std::abs(green_defect(fx.model, fx.tuple, f, g)) /
         (fx.model.gram_x.norm(f) * fx.model.gram_x.norm(g));
}

}  // namespace

TEST_CASE("transport traces reproduce the integration-by-parts boundary term") {
  // i (f(1) conj g(1) - f(0) conj g(0)) computed by hand from endpoint values.
  auto fx = fixtures::transport(64);
  for (int t = 0; t < 20; ++t) {
    Vector f = random_vector(64), g = random_vector(64);
    const cplx expected = cplx{0, 1} * (f[63] * std::conj(g[63]) - f[0] * std::conj(g[0]));
    CHECK(std::abs(boundary_form(fx.tuple, f, g) - expected) < 1e-12 * (1 + std::abs(expected)));
  }
}

TEST_CASE("sturm traces reproduce the integration-by-parts boundary term") {
  // -f'(1) conj g(1) + f(1) conj g'(1) + f'(0) conj g(0) - f(0) conj g'(0)
  auto fx = fixtures::sturm(16);
  const auto& x = fx.nodes;
  for (int t = 0; t < 10; ++t) {
    // Exact cubic polynomials, for which the collocation derivative is exact.
    const cplx a = random_cplx(), b = random_cplx(), c = random_cplx(), d = random_cplx();
    const cplx p = random_cplx(), q = random_cplx(), r = random_cplx(), s = random_cplx();
    Vector f(x.size()), g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      f[j] = a + b * x[j] + c * x[j] * x[j] + d * x[j] * x[j] * x[j];
      g[j] = p + q * x[j] + r * x[j] * x[j] + s * x[j] * x[j] * x[j];
    }
    const cplx f0 = a, f1 = a + b + c + d, df0 = b, df1 = b + 2.0 * c + 3.0 * d;
    const cplx g0 = p, g1 = p + q + r + s, dg0 = q, dg1 = q + 2.0 * r + 3.0 * s;
    const cplx expected = -df1 * std::conj(g1) + f1 * std::conj(dg1) + df0 * std::conj(g0) -
                          f0 * std::conj(dg0);
    CHECK(std::abs(boundary_form(fx.tuple, f, g) - expected) < 1e-10 * (1 + std::abs(expected)));
  }
}

TEST_CASE("green_defect examples") {
  auto fx = fixtures::transport(64);
  Vector zero(64);
  Vector g = fixtures::random_smooth_state(fx.nodes, rng());
  CHECK(std::abs(green_defect(fx.model, fx.tuple, zero, g)) == 0.0);

  // An element of dom A: f vanishes at both ends, so the traces vanish and
  // the defect reduces to 2i Im (A* f | f).
  Vector f(64);
  for (std::size_t j = 0; j < 64; ++j) {
    const double x = fx.nodes[j];
    f[j] = x * (1 - x) * std::exp(cplx{0.0, 3.0 * x});
  }
  CHECK(std::abs(boundary_form(fx.tuple, f, f)) < 1e-15);
  const cplx d = green_defect(fx.model, fx.tuple, f, f);
  CHECK(std::abs(d.real()) < 1e-12);
  const cplx two_i_im = 2.0 * cplx{0, 1} * fx.model.gram_x.inner(fx.model.astar * f, f).imag();
  CHECK(std::abs(d - two_i_im) < 1e-12);
  CHECK(std::abs(d) < fx.tolerance);

  CHECK_THROWS_AS(green_defect(fx.model, fx.tuple, Vector(3), g), InvalidInput);
}

TEST_CASE("every shipped fixture satisfies the Green identity on 100 smooth pairs") {
  for (const auto& name : fixtures::default_names()) {
    CAPTURE(name);
    auto fx = fixtures::by_name(name);
    CHECK(traces_full_rank(fx.tuple));
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      Vector f = fixtures::random_smooth_state(fx.nodes, rng());
      Vector g = fixtures::random_smooth_state(fx.nodes, rng());
      worst = std::max(worst, rel_defect(fx, f, g));
    }
    CHECK(worst < fx.tolerance);
  }
}

TEST_CASE("a wrong sign in Gamma1 is detected") {
  auto fx = fixtures::transport(32);
  fx.tuple.gamma1 = -1.0 * fx.tuple.gamma1;
  Vector f = fixtures::random_smooth_state(fx.nodes, rng());
  Vector g = fixtures::random_smooth_state(fx.nodes, rng());
  CHECK(rel_defect(fx, f, g) > 1e-3);
}

TEST_CASE("to_boundary_triple") {
  SUBCASE("identity V on trivial duality returns the input") {
    auto fx = fixtures::transport(32);
    auto pair = to_boundary_triple(fx.tuple, TupleTransform::identity(fx.tuple));
    CHECK((pair.triple.gamma0 - fx.tuple.gamma0).max_abs() < 1e-15);
    CHECK((pair.triple.gamma1 - fx.tuple.gamma1).max_abs() < 1e-15);
  }
  SUBCASE("V = 2I halves Gamma0 and doubles Gamma1") {
    auto fx = fixtures::transport(64);
    auto t = TupleTransform::from_v(2.0 * ComplexMatrix::identity(1), fx.tuple);
    auto pair = to_boundary_triple(fx.tuple, t);
    CHECK((pair.triple.gamma0 - 0.5 * fx.tuple.gamma0).max_abs() < 1e-15);
    CHECK((pair.triple.gamma1 - 2.0 * fx.tuple.gamma1).max_abs() < 1e-15);
    for (int k = 0; k < 10; ++k) {
      Vector f = fixtures::random_smooth_state(fx.nodes, rng());
      Vector g = fixtures::random_smooth_state(fx.nodes, rng());
      const double n = fx.model.gram_x.norm(f) * fx.model.gram_x.norm(g);
      CHECK(std::abs(green_defect(fx.model, pair.triple, f, g)) < 1e-8 * n);
      CHECK(std::abs(green_defect(fx.model, pair.dual, f, g)) < 1e-8 * n);
    }
  }
  SUBCASE("dual of the dual is the original triple") {
    auto fx = fixtures::sturm(16);
    auto tri = to_boundary_triple(fx.tuple, TupleTransform::identity(fx.tuple)).triple;
    auto back = dual_triple(dual_triple(tri));
    CHECK((back.gamma0 - tri.gamma0).max_abs() == 0.0);
    CHECK((back.gamma1 - tri.gamma1).max_abs() == 0.0);
  }
  SUBCASE("singular V is rejected") {
    auto fx = fixtures::sturm(16);
    CHECK_THROWS_AS(TupleTransform::from_v(ComplexMatrix(2, 2), fx.tuple), InvalidInput);
  }
}

TEST_CASE("transforms of the rigged tuple preserve the boundary form on all basis pairs") {
  auto fx = fixtures::rigged_sturm(20);
  for (int trial = 0; trial < 5; ++trial) {
    ComplexMatrix v = random_matrix(2, 2) + 3.0 * ComplexMatrix::identity(2);
    auto t = TupleTransform::from_v(v, fx.tuple);
    CHECK(t.pairing_defect(fx.tuple) < 1e-10);
    auto pair = to_boundary_triple(fx.tuple, t);
    double worst = 0.0;
    const std::size_t n = fx.model.dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Vector ei(n), ej(n);
        ei[i] = 1.0;
        ej[j] = 1.0;
        worst = std::max(worst, std::abs(boundary_form(pair.triple, ei, ej) -
                                         boundary_form(fx.tuple, ei, ej)));
      }
    CHECK(worst < 1e-10 * 1e3);  // entries of the trace rows are O(n^2)
  }
}

TEST_CASE("natural_adjoint") {
  auto trivial = trivial_tuple(ComplexMatrix(3, 5), ComplexMatrix(3, 5));
  ComplexMatrix z = random_matrix(3, 3);
  CHECK((natural_adjoint(z, trivial) - z.adjoint()).max_abs() < 1e-14);
  ComplexMatrix ii = cplx{0, 1} * ComplexMatrix::identity(3);
  CHECK((natural_adjoint(ii, trivial) + ii).max_abs() < 1e-15);

  auto fx = fixtures::rigged_sturm(16);
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix zz = random_matrix(2, 2);
    ComplexMatrix zn = natural_adjoint(zz, fx.tuple);
    CHECK(natural_adjoint_defect(zz, zn, fx.tuple) < 1e-10);
    CHECK((natural_adjoint(zn, fx.tuple) - zz).max_abs() < 1e-12);
  }
  CHECK_THROWS_AS(natural_adjoint(random_matrix(3, 3), fx.tuple), InvalidInput);
}

TEST_CASE("accretivity_defect examples and properties") {
  auto tr = trivial_tuple(ComplexMatrix(2, 4), ComplexMatrix(2, 4));
  CHECK(accretivity_defect(ComplexMatrix::identity(2), tr) == doctest::Approx(1.0));
  CHECK(std::abs(accretivity_defect(cplx{0, 2.5} * ComplexMatrix::identity(2), tr)) < 1e-15);
  CHECK(accretivity_defect(ComplexMatrix::diagonal(std::vector<double>{1.0, -0.5}), tr) ==
        doctest::Approx(-0.5));
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix z = random_matrix(2, 2);
    const double a = accretivity_defect(z, tr);
    for (double c : {0.0, 0.3, 2.0})
      CHECK(accretivity_defect(z + c * ComplexMatrix::identity(2), tr) ==
            doctest::Approx(a + c).epsilon(1e-12));
    // Consistency with the Hermitian part: the defect is minus the top
    // eigenvalue of -Re Z, so it is >= 0 exactly when -Re Z <= 0.
    const double top = linalg::hermitian_eig(-1.0 * z.hermitian_part(), false).values.back();
    CHECK(a == doctest::Approx(-top).epsilon(1e-12));
    CHECK((a >= 0) == (top <= 0));
  }
}

TEST_CASE("accretivity in the weighted duality uses the pairing and gram_minus") {
  auto fx = fixtures::rigged_sturm(16);
  // Z = diag(w) maps to P Z = I: Re <Zy, y> = |y|^2, and with
  // gram_minus = diag(4, 1/4) the minimum over unit y is 1/4.
  ComplexMatrix z = ComplexMatrix::diagonal(std::vector<double>{2.0, 0.5});
  CHECK(accretivity_defect(z, fx.tuple) == doctest::Approx(0.25));
}
