#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gibc/errors.hpp"
#include "gibc/sobolev.hpp"
#include "support.hpp"

using namespace gibc;
using namespace gibc::sobolev;

namespace {

constexpr double kPi = std::numbers::pi;

cplx at(const std::vector<cplx>& c, long k) { return c[static_cast<std::size_t>(k + long(c.size() / 2))]; }

}  // namespace

TEST_CASE("SobolevScale weights are symmetric and at least one") {
  auto sc = SobolevScale::make(0.5, 10);
  for (long k = -10; k <= 10; ++k) {
    CHECK(sc.weight(k) == sc.weight(-k));
    CHECK(sc.weight(k) >= 1.0);
  }
  CHECK(sc.weight(3) == doctest::Approx(std::pow(10.0, 0.25)));
  CHECK_THROWS_AS(SobolevScale::make(0.0, 4), InvalidInput);
  CHECK_THROWS_AS(SobolevScale::make(1.5, 4), InvalidInput);
}

TEST_CASE("fourier_coeffs of trigonometric data") {
  auto one = fourier_coeffs(ImpedanceCoefficient::constant(1.0), 8);
  for (long k = -8; k <= 8; ++k) CHECK(std::abs(at(one, k) - (k == 0 ? 1.0 : 0.0)) == 0.0);

  auto e = ImpedanceCoefficient::function([](double t) { return std::polar(1.0, t); }, "exp");
  auto c = fourier_coeffs(e, 16);
  for (long k = -16; k <= 16; ++k)
    CHECK(std::abs(at(c, k) - (k == 1 ? 1.0 : 0.0)) < 1e-12);

  CHECK_THROWS_AS(fourier_coeffs(e, 16, 100), InvalidInput);
}

TEST_CASE("power-singular coefficients match high-precision quadrature") {
  // (1/pi) int_0^pi theta^{-a} cos(k theta), 30-digit values computed after the
  // substitution theta = u^{1/(1-a)}, which removes the endpoint singularity.
  struct Ref {
    double a, k, value;
  };
  const Ref refs[] = {{0.5, 0, 1.1283791670955126},  {0.5, 1, 0.42199443807766387},
                      {0.5, 5, 0.17953930177487844}, {0.5, 37, 0.065606579246786724},
                      {0.9, 3, 2.6832035509167899},  {0.3, 100, 0.0074655995556002855},
                      {0.9, 256, 1.7178554072522265}};
  for (const auto& r : refs) {
    CAPTURE(r.a);
    CAPTURE(r.k);
    CHECK(std::abs(power_cosine_integral(r.a, r.k) - r.value) < 1e-9);
  }
  // zeta_hat(0) of |theta|^{-1/2} is 2/sqrt(pi) in closed form.
  auto c = fourier_coeffs(ImpedanceCoefficient::power(0.5), 4);
  CHECK(std::abs(at(c, 0) - 2.0 / std::sqrt(kPi)) < 1e-10);
  CHECK_THROWS_AS(ImpedanceCoefficient::power(1.0), InvalidInput);
  CHECK_THROWS_AS(ImpedanceCoefficient::power(1.2), InvalidInput);
}

TEST_CASE("real-valued coefficients are conjugate symmetric") {
  auto z = ImpedanceCoefficient::function(
      [](double t) { return cplx{1.0 + 0.3 * std::cos(2 * t) + std::abs(std::sin(t)), 0.0}; },
      "smooth");
  auto c = fourier_coeffs(z, 32);
  for (long k = 1; k <= 32; ++k) CHECK(std::abs(at(c, -k) - std::conj(at(c, k))) < 1e-10);
}

TEST_CASE("multiplier_section examples") {
  auto b = multiplier_section(ImpedanceCoefficient::constant(1.0), 0.5, 4);
  for (long m = -4; m <= 4; ++m)
    for (long n = -4; n <= 4; ++n) {
      const cplx expected = m == n ? 1.0 / std::sqrt(1.0 + double(n * n)) : 0.0;
      CHECK(std::abs(b(std::size_t(m + 4), std::size_t(n + 4)) - expected) < 1e-15);
    }
  CHECK(b(4, 4).real() == 1.0);
  CHECK(b(5, 5).real() == doctest::Approx(0.7071067811865476));
  CHECK(b(6, 6).real() == doctest::Approx(0.4472135954999579));

  CHECK(multiplier_section(ImpedanceCoefficient::constant(0.0), 0.5, 5).max_abs() == 0.0);

  auto e = ImpedanceCoefficient::function([](double t) { return std::polar(1.0, t); }, "exp");
  auto be = multiplier_section(e, 0.5, 6);
  for (long m = -6; m <= 6; ++m)
    for (long n = -6; n <= 6; ++n) {
      const cplx expected =
          m - n == 1 ? 1.0 / (sobolev_weight(0.5, m) * sobolev_weight(0.5, n)) : 0.0;
      CHECK(std::abs(be(std::size_t(m + 6), std::size_t(n + 6)) - expected) < 1e-12);
    }
}

TEST_CASE("sections of real nonnegative zeta are Hermitian and accretive") {
  for (double a : {0.3, 0.5, 0.9}) {
    auto b = multiplier_section(ImpedanceCoefficient::power(a), 0.5, 24);
    CHECK((b - b.adjoint()).max_abs() < 1e-10);
    CHECK(linalg::hermitian_eig(b.hermitian_part(), false).values.front() >= -1e-10);
  }
  auto z = ImpedanceCoefficient::function(
      [](double t) { return cplx{std::abs(std::sin(3 * t)), 0.0}; }, "rectified");
  auto b = multiplier_section(z, 0.75, 20);
  CHECK((b - b.adjoint()).max_abs() < 1e-10);
  CHECK(linalg::hermitian_eig(b.hermitian_part(), false).values.front() >= -1e-10);
}

TEST_CASE("singular values grow with the section size") {
  auto z = ImpedanceCoefficient::power(0.5, cplx{1.0, 0.4});
  std::vector<double> prev;
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    auto s = linalg::singular_values(multiplier_section(z, 0.5, n));
    for (std::size_t k = 0; k < prev.size(); ++k) CHECK(s[k] >= prev[k] - 1e-8);
    prev = s;
  }
}

TEST_CASE("sections scale linearly in zeta") {
  const cplx c{0.7, -1.3};
  auto b = multiplier_section(ImpedanceCoefficient::power(0.3), 0.5, 16);
  auto bc = multiplier_section(ImpedanceCoefficient::power(0.3, c), 0.5, 16);
  CHECK((bc - c * b).max_abs() < 1e-12);
  auto z = ImpedanceCoefficient::fourier({0.2, 1.0, 0.2});
  auto z2 = ImpedanceCoefficient::fourier({0.2 * c, c, 0.2 * c});
  CHECK((multiplier_section(z2, 0.5, 10) - c * multiplier_section(z, 0.5, 10)).max_abs() < 1e-12);
}

TEST_CASE("i Lambda has the identity section at every truncation") {
  auto op = i_lambda(0.5);
  for (std::size_t n : {4u, 16u, 64u}) {
    auto b = operator_section(op, 0.5, n);
    CHECK((b - cplx{0, 1} * linalg::ComplexMatrix::identity(2 * n + 1)).max_abs() < 1e-14);
    for (double s : linalg::singular_values(b)) CHECK(std::abs(s - 1.0) < 1e-14);
  }
}

TEST_CASE("compactness gate verdicts") {
  const auto& sched = default_schedule();
  SUBCASE("constant one") {
    auto r = compactness_gate(ImpedanceCoefficient::constant(1.0), 0.5, sched);
    CHECK(r.verdict == Verdict::compact);
    for (std::size_t i = 0; i < sched.size(); ++i) {
      const double mid = std::ceil(sched[i] / 2.0);
      // Sorted diagonal: 1, then pairs (1 + n^2)^{-1/2}; entry ceil(N/2) is n = floor(ceil(N/2)/2).
      const double n = std::floor(mid / 2.0);
      CHECK(r.tail_indicator[i] == doctest::Approx(1.0 / std::sqrt(1.0 + n * n)));
    }
  }
  SUBCASE("power singularities") {
    for (double a : {0.3, 0.5, 0.9}) {
      CAPTURE(a);
      auto r = compactness_gate(ImpedanceCoefficient::power(a), 0.5, sched);
      CHECK(r.verdict == Verdict::compact);
      for (double d : r.accretivity_defect) CHECK(d >= -1e-10);
    }
  }
  SUBCASE("i Lambda") {
    auto r = compactness_gate(i_lambda(0.5), 0.5, sched);
    CHECK(r.verdict == Verdict::non_compact);
    for (const auto& p : r.singular_profiles)
      for (double s : p) CHECK(std::abs(s - 1.0) < 1e-14);
  }
  SUBCASE("profiles are sorted descending") {
    auto r = compactness_gate(ImpedanceCoefficient::power(0.5, cplx{1, 2}), 0.5, sched);
    for (const auto& p : r.singular_profiles) CHECK(std::is_sorted(p.rbegin(), p.rend()));
  }
  SUBCASE("schedule validation") {
    CHECK_THROWS_AS(compactness_gate(ImpedanceCoefficient::constant(1.0), 0.5, {16, 32}),
                    InvalidInput);
    CHECK_THROWS_AS(compactness_gate(ImpedanceCoefficient::constant(1.0), 0.5, {16, 64, 32}),
                    InvalidInput);
  }
}

TEST_CASE("lq_report") {
  auto one = lq_report(ImpedanceCoefficient::constant(1.0), 2.0, 0.5);
  CHECK(one.lq_norm == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-14));
  CHECK(one.theorem_applies);

  // int |c|^q |theta|^{-aq} = 2 |c|^q pi^{1-aq} / (1 - aq)
  for (auto [a, q] : {std::pair{0.5, 1.5}, {0.9, 1.05}, {0.3, 3.0}}) {
    const cplx c{0.6, 0.8};
    auto r = lq_report(ImpedanceCoefficient::power(a, c), q, 0.5, {});
    const double exact = std::pow(2 * std::pow(kPi, 1 - a * q) / (1 - a * q), 1 / q);
    CHECK(std::abs(r.lq_norm - exact) < 1e-6);
  }

  auto div = lq_report(ImpedanceCoefficient::power(0.5), 3.0, 0.5);
  CHECK_FALSE(div.finite);
  CHECK(std::isinf(div.lq_norm));
  CHECK_FALSE(div.theorem_applies);
  CHECK(lq_report(ImpedanceCoefficient::power(0.5), 1.5, 0.5).theorem_applies);

  auto r = lq_report(ImpedanceCoefficient::power(0.9), 1.05, 0.5);
  CHECK(r.finite);
  CHECK(r.theorem_applies);
  CHECK(std::isfinite(r.holder_ratio));
  CHECK(compactness_gate(ImpedanceCoefficient::power(0.9), 0.5, default_schedule()).verdict ==
        Verdict::compact);

  CHECK_FALSE(lq_report(ImpedanceCoefficient::constant(-1.0), 2.0, 0.5).theorem_applies);
  CHECK_FALSE(lq_report(ImpedanceCoefficient::constant(1.0), 1.0, 0.5).theorem_applies);
  CHECK_THROWS_AS(lq_report(ImpedanceCoefficient::constant(1.0), 0.5, 0.5), InvalidInput);
}

TEST_CASE("theorem_applies implies a compact verdict") {
  std::vector<ImpedanceCoefficient> zs{
      ImpedanceCoefficient::constant(2.0), ImpedanceCoefficient::constant(cplx{0.5, 3.0}),
      ImpedanceCoefficient::power(0.3), ImpedanceCoefficient::power(0.7, cplx{1.0, -2.0}),
      ImpedanceCoefficient::function(
          [](double t) { return cplx{1.0 + std::cos(t), 0.5 * std::sin(2 * t)}; }, "trig")};
  for (const auto& z : zs) {
    CAPTURE(z.label);
    auto r = lq_report(z, 1.2, 0.5, {});
    REQUIRE(r.theorem_applies);
    CHECK(compactness_gate(z, 0.5, default_schedule()).verdict == Verdict::compact);
  }
}

TEST_CASE("accretivity claims are validated") {
  auto z = ImpedanceCoefficient::sampled({1.0, 0.5, -0.2, 0.3});
  z.accretive_claimed = true;
  CHECK_THROWS_AS(z.validate(), InvalidInput);
  z.samples[2] = 0.0;
  CHECK_NOTHROW(z.validate());
}
