#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gibc/errors.hpp"
#include "gibc/model_problems.hpp"

namespace gibc::models {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

cplx newton(cplx zeta, cplx lambda) {
  for (int it = 0; it < 60; ++it) {
    const cplx g = string_characteristic(zeta, lambda);
    const cplx dg = kI * zeta * std::cos(lambda) + std::sin(lambda);
    if (dg == cplx{}) break;
    const cplx step = g / dg;
    lambda -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(lambda))) break;
  }
  return lambda;
}

}  // namespace

cplx string_closed_form(cplx zeta, long n) {
  cplx w = (zeta + 1.0) / (zeta - 1.0);
  w = {w.real(), w.imag() + 0.0};  // -0 would select the other side of the cut
  return (std::log(w) + 2.0 * kPi * kI * static_cast<double>(n)) /
         (2.0 * kI);
}

cplx string_characteristic(cplx zeta, cplx lambda) {
  return kI * zeta * std::sin(lambda) - std::cos(lambda);
}

cplx string_newton_root(cplx zeta, long n) {
  cplx lambda = (static_cast<double>(n) + 0.5) * kPi;
  if (std::abs(zeta) < 1.0) {
    constexpr int steps = 32;
    for (int k = 1; k <= steps; ++k) lambda = newton(zeta * (double(k) / steps), lambda);
    return lambda;
  }
  return newton(zeta, string_closed_form(zeta, n) + cplx{0.05, -0.05});
}

SpectrumReport string_spectrum(const StringSpec& spec) {
  const cplx zeta = spec.zeta;
  if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag()))
    throw InvalidInput("impedance must be finite");
  if (zeta.real() < 0.0 && !spec.allow_nonaccretive)
    throw InvalidInput("impedance must have Re zeta >= 0");
  SpectrumReport r;
  if (zeta == cplx{1.0, 0.0}) {
    r.critical_damping = true;
    r.notes.push_back("critical damping: zeta = 1 has no eigenvalues");
    return r;
  }
  if (zeta == cplx{-1.0, 0.0}) {
    r.notes.push_back("zeta = -1 has no eigenvalues");
    return r;
  }
  const long n_modes = static_cast<long>(spec.n_modes);
  const long lo = spec.mirrored ? -n_modes : 0;
  for (long n = lo; n < n_modes; ++n) {
    const cplx lambda = string_closed_form(zeta, n);
    r.values.push_back({lambda, std::abs(string_characteristic(zeta, lambda)),
                        "n=" + std::to_string(n), 1, false});
  }
  // The principal Log may shift the mode index along a continuation path, so
  // Newton roots are compared with the nearest closed-form root.
  for (long n = lo; n < n_modes; ++n) {
    const cplx nr = string_newton_root(zeta, n);
    double best = std::numeric_limits<double>::infinity();
    for (long j = n - 2; j <= n + 2; ++j) best = std::min(best, std::abs(nr - string_closed_form(zeta, j)));
    r.cross_check = std::max(r.cross_check, best);
  }
  return r;
}

}  // namespace gibc::models
