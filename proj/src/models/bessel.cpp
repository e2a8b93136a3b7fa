#include <cmath>
#include <vector>

#include "gibc/errors.hpp"
#include "gibc/model_problems.hpp"

namespace gibc::models {

namespace {

using lcplx = std::complex<long double>;

constexpr double kSeriesRadius = 12.0;

// Power series for J_m and J_m' in extended precision; terms peak near
// k ~ |z|/2 and the extra digits absorb the cancellation for real arguments.
BesselValue series(int m, cplx zd) {
  const lcplx z(zd.real(), zd.imag());
  const lcplx half = z / 2.0L;
  const lcplx q = -half * half;
  // term_k = (-1)^k (z/2)^{2k+m} / (k! (k+m)!); J_m' = sum term_k (2k+m) / z.
  lcplx term = 1.0L;
  for (int k = 1; k <= m; ++k) term *= half / static_cast<long double>(k);
  lcplx sum = term, dsum = static_cast<long double>(m) * term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k + m));
    sum += term;
    dsum += static_cast<long double>(2 * k + m) * term;
    if (std::abs(term) * (2 * k + m) < 1e-21L * (std::abs(sum) + std::abs(dsum)) && k > std::abs(z))
      break;
  }
  // dsum / z, written so that z = 0 is harmless: for m = 1 the k = 0 term is
  // (z/2), giving 1/2; otherwise dsum vanishes to the order needed.
  lcplx d;
  if (z == lcplx(0.0L)) {
    d = m == 1 ? lcplx(0.5L) : lcplx(0.0L);
  } else {
    d = dsum / z;
  }
  return {{static_cast<double>(sum.real()), static_cast<double>(sum.imag())},
          {static_cast<double>(d.real()), static_cast<double>(d.imag())}};
}

// Miller backward recurrence normalized by e^{+-iz} = J_0 + 2 sum (+-i)^k J_k,
// choosing the sign for which the exponential is large so that the sum does
// not cancel. Returns J_0..J_{top}.
std::vector<cplx> miller(int top, cplx z) {
  const double az = std::abs(z);
  int n = static_cast<int>(std::max<double>(top, az)) + 40 + static_cast<int>(3.0 * std::cbrt(az));
  n += n % 2;
  const cplx unit = z.imag() <= 0.0 ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
  const cplx target = std::exp(unit * z);
  std::vector<cplx> f(static_cast<std::size_t>(top) + 1);
  cplx next{}, cur{1e-30, 0.0}, sum{};
  // unit^k for k = n, tracked downwards.
  cplx upow = std::pow(unit, n);
  const cplx unit_inv = 1.0 / unit;
  for (int k = n; k >= 0; --k) {
    if (k <= top) f[static_cast<std::size_t>(k)] = cur;
    sum += (k == 0 ? 1.0 : 2.0) * upow * cur;
    if (k == 0) break;
    const cplx prev = (2.0 * k / z) * cur - next;
    next = cur;
    cur = prev;
    upow *= unit_inv;
    if (std::abs(cur) > 1e200) {
      const double s = 1e-200;
      cur *= s;
      next *= s;
      sum *= s;
      for (int j = k - 1; j <= top; ++j)
        if (j >= 0) f[static_cast<std::size_t>(j)] *= s;
    }
  }
  const cplx scale = target / sum;
  for (auto& v : f) v *= scale;
  return f;
}

}  // namespace

BesselValue bessel_j(int m, cplx z) {
  if (m < 0) throw InvalidInput("Bessel order must be nonnegative");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 200.0)
    throw InvalidInput("Bessel argument outside |z| <= 200");
  if (std::abs(z) <= kSeriesRadius) {
    return series(m, z);
  }
  const auto f = miller(m + 1, z);
  const cplx jm = f[static_cast<std::size_t>(m)];
  const cplx jp = f[static_cast<std::size_t>(m + 1)];
  const cplx jl = m == 0 ? -jp : f[static_cast<std::size_t>(m - 1)];
  return {jm, 0.5 * (jl - jp)};
}

}  // namespace gibc::models
