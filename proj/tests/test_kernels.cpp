#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gibc/kernels.hpp"
#include "support.hpp"

using namespace gibc::kernels;
using testsupport::random_vector;

namespace {

std::vector<Isa> compiled_isas() {
  std::vector<Isa> out{Isa::scalar};
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (isa_available(isa)) out.push_back(isa);
  return out;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("scalar reference kernels on hand-checked inputs") {
  const KernelTable& t = table_for(Isa::scalar);
  std::vector<cplx> x{{1, 2}, {3, -1}}, y{{0, 1}, {2, 2}};
  // conj(1+2i)*(i) + conj(3-i)*(2+2i) = (2+i) + (4+8i)
  CHECK(std::abs(t.dotc(x.data(), y.data(), 2) - cplx(6, 9)) < 1e-15);
  // (1+2i)*i + (3-i)*(2+2i) = (-2+i) + (8+4i)
  CHECK(std::abs(t.dotu(x.data(), y.data(), 2) - cplx(6, 5)) < 1e-15);
  CHECK(t.norm_sq(x.data(), 2) == doctest::Approx(15.0));
  std::vector<double> w{2.0, -1.0};
  CHECK(std::abs(t.weighted_sum(w.data(), x.data(), 2) - cplx(-1, 5)) < 1e-15);
  t.axpy({0, 1}, x.data(), y.data(), 2);
  CHECK(std::abs(y[0] - cplx(-2, 2)) < 1e-15);
  CHECK(std::abs(y[1] - cplx(3, 5)) < 1e-15);
}

TEST_CASE("every compiled SIMD variant matches the scalar reference") {
  const KernelTable& ref = table_for(Isa::scalar);
  for (Isa isa : compiled_isas()) {
    CAPTURE(isa_name(isa));
    const KernelTable& t = table_for(isa);
    REQUIRE(t.isa == isa);
    // Odd and even lengths exercise both the vector body and the tail.
    for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 64u, 65u, 1001u}) {
      CAPTURE(n);
      auto x = random_vector(n), y = random_vector(n);
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = std::cos(0.3 * static_cast<double>(i));
      const double scale = 1e-13 * static_cast<double>(n + 1);
      CHECK(rel(t.dotc(x.data(), y.data(), n), ref.dotc(x.data(), y.data(), n)) < scale);
      CHECK(rel(t.dotu(x.data(), y.data(), n), ref.dotu(x.data(), y.data(), n)) < scale);
      CHECK(std::abs(t.norm_sq(x.data(), n) - ref.norm_sq(x.data(), n)) <
            scale * (1.0 + ref.norm_sq(x.data(), n)));
      CHECK(rel(t.weighted_sum(w.data(), x.data(), n), ref.weighted_sum(w.data(), x.data(), n)) <
            scale);
      auto y1 = y, y2 = y;
      const cplx a{0.7, -1.3};
      t.axpy(a, x.data(), y1.data(), n);
      ref.axpy(a, x.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(rel(y1[i], y2[i]) < 1e-14);
    }
    for (std::size_t rows : {1u, 5u}) {
      for (std::size_t cols : {1u, 4u, 9u}) {
        auto a = random_vector(rows * cols), x = random_vector(cols);
        std::vector<cplx> y1(rows), y2(rows);
        t.gemv(a.data(), rows, cols, x.data(), y1.data());
        ref.gemv(a.data(), rows, cols, x.data(), y2.data());
        for (std::size_t i = 0; i < rows; ++i) CHECK(rel(y1[i], y2[i]) < 1e-13);
      }
    }
  }
}

TEST_CASE("active table is one of the compiled variants") {
  const Isa isa = active().isa;
  CHECK(isa_available(isa));
}
