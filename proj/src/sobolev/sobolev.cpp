#include "gibc/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gibc/errors.hpp"
#include "gibc/parallel.hpp"
#include "gibc/quadrature.hpp"

namespace gibc::sobolev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGrading = 0.5;
constexpr int kLevels = 40;
constexpr std::size_t kPanelNodes = 20;
constexpr std::size_t kFineGrid = 4096;

void require_s(double s) {
  if (!(s > 0.0 && s <= 1.0)) throw InvalidInput("Sobolev index s must lie in (0, 1]");
}

// int over [lo, hi] of f using panels of 20-point Gauss-Legendre, subdivided
// so that each subpanel sees a bounded phase change k * len.
template <class F>
double panel_integral(double lo, double hi, double k, F&& f) {
  const double len = hi - lo;
  const std::size_t nsub = 1 + static_cast<std::size_t>(std::abs(k) * len / 4.0);
  const double h = len / static_cast<double>(nsub);
  static const quad::Rule ref = quad::gauss_legendre(kPanelNodes);
  double sum = 0.0;
  for (std::size_t p = 0; p < nsub; ++p) {
    const double mid = lo + h * (static_cast<double>(p) + 0.5);
    double part = 0.0;
    for (std::size_t i = 0; i < kPanelNodes; ++i)
      part += ref.weights[i] * f(mid + 0.5 * h * ref.nodes[i]);
    sum += 0.5 * h * part;
  }
  return sum;
}

// int_0^pi theta^{-b} g(theta) on the graded mesh; `head` integrates the
// innermost panel [0, eps] analytically.
template <class G, class H>
double graded_integral(double b, double k, G&& g, H&& head) {
  double sum = 0.0;
  double hi = kPi;
  for (int j = 0; j < kLevels; ++j) {
    const double lo = hi * kGrading;
    sum += panel_integral(lo, hi, k, [&](double t) { return std::pow(t, -b) * g(t); });
    hi = lo;
  }
  return sum + head(hi);
}

std::vector<cplx> dft(const std::vector<cplx>& samples, std::size_t n_max) {
  const std::size_t m = samples.size();
  std::vector<cplx> twiddle(m);
  for (std::size_t j = 0; j < m; ++j)
    twiddle[j] = std::polar(1.0, -2.0 * kPi * static_cast<double>(j) / static_cast<double>(m));
  std::vector<cplx> out(2 * n_max + 1);
  const long lm = static_cast<long>(m);
  for (long k = -static_cast<long>(n_max); k <= static_cast<long>(n_max); ++k) {
    const long step = ((k % lm) + lm) % lm;
    cplx acc{};
    long idx = 0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += samples[j] * twiddle[static_cast<std::size_t>(idx)];
      idx += step;
      if (idx >= lm) idx -= lm;
    }
    out[static_cast<std::size_t>(k + static_cast<long>(n_max))] = acc / static_cast<double>(m);
  }
  return out;
}

std::vector<cplx> sample_grid(const ImpedanceCoefficient& z, std::size_t m) {
  std::vector<cplx> v(m);
  for (std::size_t j = 0; j < m; ++j) {
    double t = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
    if (t > kPi) t -= 2.0 * kPi;
    v[j] = z.evaluate(t);
  }
  return v;
}

const std::vector<cplx>& grid_values(const ImpedanceCoefficient& z, std::vector<cplx>& scratch) {
  if (z.kind == CoeffKind::sampled && !z.fn) return z.samples;
  scratch = sample_grid(z, kFineGrid);
  return scratch;
}

}  // namespace

double sobolev_weight(double s, long k) {
  return std::pow(1.0 + static_cast<double>(k) * static_cast<double>(k), 0.5 * s);
}

SobolevScale SobolevScale::make(double s, std::size_t n) {
  require_s(s);
  SobolevScale sc{s, n, {}};
  sc.weights.resize(2 * n + 1);
  for (long k = -static_cast<long>(n); k <= static_cast<long>(n); ++k)
    sc.weights[static_cast<std::size_t>(k + static_cast<long>(n))] = sobolev_weight(s, k);
  return sc;
}

ImpedanceCoefficient ImpedanceCoefficient::constant(cplx c) {
  ImpedanceCoefficient z;
  z.kind = CoeffKind::constant;
  z.value = c;
  z.label = "constant";
  return z;
}

ImpedanceCoefficient ImpedanceCoefficient::sampled(std::vector<cplx> values) {
  if (values.empty()) throw InvalidInput("sampled impedance needs at least one sample");
  ImpedanceCoefficient z;
  z.kind = CoeffKind::sampled;
  z.samples = std::move(values);
  z.label = "sampled";
  return z;
}

ImpedanceCoefficient ImpedanceCoefficient::function(std::function<cplx(double)> f,
                                                    std::string label) {
  ImpedanceCoefficient z;
  z.kind = CoeffKind::sampled;
  z.fn = std::move(f);
  z.label = std::move(label);
  return z;
}

ImpedanceCoefficient ImpedanceCoefficient::fourier(std::vector<cplx> coeffs) {
  if (coeffs.size() % 2 == 0) throw InvalidInput("Fourier coefficients must be indexed -K..K");
  ImpedanceCoefficient z;
  z.kind = CoeffKind::fourier;
  z.coeffs = std::move(coeffs);
  z.label = "fourier";
  return z;
}

ImpedanceCoefficient ImpedanceCoefficient::power(double a, cplx strength) {
  ImpedanceCoefficient z;
  z.kind = CoeffKind::power_singular;
  z.a = a;
  z.strength = strength;
  z.label = "power";
  z.validate();
  return z;
}

cplx ImpedanceCoefficient::evaluate(double theta) const {
  switch (kind) {
    case CoeffKind::constant:
      return value;
    case CoeffKind::power_singular:
      return theta == 0.0 ? cplx{std::numeric_limits<double>::infinity(), 0.0}
                          : strength * std::pow(std::abs(theta), -a);
    case CoeffKind::fourier: {
      const long kk = static_cast<long>(coeffs.size() / 2);
      cplx acc{};
      for (long k = -kk; k <= kk; ++k)
        acc += coeffs[static_cast<std::size_t>(k + kk)] * std::polar(1.0, k * theta);
      return acc;
    }
    case CoeffKind::sampled: {
      if (fn) return fn(theta);
      // Periodic linear interpolation on theta_j = 2 pi j / M.
      const double m = static_cast<double>(samples.size());
      double u = theta / (2.0 * kPi) * m;
      u -= m * std::floor(u / m);
      const auto j = static_cast<std::size_t>(u) % samples.size();
      const double f = u - std::floor(u);
      return (1.0 - f) * samples[j] + f * samples[(j + 1) % samples.size()];
    }
  }
  return {};
}

double ImpedanceCoefficient::min_real_part() const {
  switch (kind) {
    case CoeffKind::constant:
      return value.real();
    case CoeffKind::power_singular:
      return strength.real() >= 0.0 ? strength.real() * std::pow(kPi, -a)
                                    : -std::numeric_limits<double>::infinity();
    default: {
      std::vector<cplx> scratch;
      const auto& v = grid_values(*this, scratch);
      double lo = std::numeric_limits<double>::infinity();
      for (const cplx x : v) lo = std::min(lo, x.real());
      return lo;
    }
  }
}

void ImpedanceCoefficient::validate() const {
  if (kind == CoeffKind::power_singular) {
    if (!(a > 0.0)) throw InvalidInput("power exponent a must be positive");
    if (a >= 1.0) throw InvalidInput("power exponent a >= 1 is not integrable");
  }
  if (accretive_claimed && min_real_part() < -1e-12)
    throw InvalidInput("impedance claimed accretive but Re zeta < 0 somewhere");
}

double power_cosine_integral(double a, double k) {
  auto head = [&](double eps) {
    return std::pow(eps, 1.0 - a) / (1.0 - a) -
           k * k * std::pow(eps, 3.0 - a) / (2.0 * (3.0 - a));
  };
  return graded_integral(a, k, [&](double t) { return std::cos(k * t); }, head) / kPi;
}

std::vector<cplx> fourier_coeffs(const ImpedanceCoefficient& zeta, std::size_t n_max,
                                 std::size_t quad_points) {
  if (quad_points == 0) quad_points = std::max<std::size_t>(8 * n_max, 64);
  if (quad_points < 8 * n_max) throw InvalidInput("quad_points must be at least 8 * n_max");
  zeta.validate();
  std::vector<cplx> out(2 * n_max + 1);
  const long nm = static_cast<long>(n_max);
  switch (zeta.kind) {
    case CoeffKind::constant:
      out[n_max] = zeta.value;
      break;
    case CoeffKind::fourier: {
      const long kk = static_cast<long>(zeta.coeffs.size() / 2);
      for (long k = -std::min(nm, kk); k <= std::min(nm, kk); ++k)
        out[static_cast<std::size_t>(k + nm)] = zeta.coeffs[static_cast<std::size_t>(k + kk)];
      break;
    }
    case CoeffKind::sampled:
      out = dft(zeta.fn ? sample_grid(zeta, quad_points) : zeta.samples, n_max);
      break;
    case CoeffKind::power_singular:
      // Even in theta, so zeta_hat(-k) = zeta_hat(k).
      for (long k = 0; k <= nm; ++k) {
        const cplx c = zeta.strength * power_cosine_integral(zeta.a, static_cast<double>(k));
        out[static_cast<std::size_t>(nm + k)] = c;
        out[static_cast<std::size_t>(nm - k)] = c;
      }
      break;
  }
  return out;
}

namespace {

ComplexMatrix section_from(const std::vector<cplx>& coeffs, double s, std::size_t n) {
  // coeffs indexed -K..K with K >= 2n.
  const long kk = static_cast<long>(coeffs.size() / 2);
  const long nn = static_cast<long>(n);
  const SobolevScale sc = SobolevScale::make(s, n);
  ComplexMatrix b(2 * n + 1, 2 * n + 1);
  for (long m = -nn; m <= nn; ++m)
    for (long j = -nn; j <= nn; ++j)
      b(static_cast<std::size_t>(m + nn), static_cast<std::size_t>(j + nn)) =
          coeffs[static_cast<std::size_t>(m - j + kk)] / (sc.weight(m) * sc.weight(j));
  return b;
}

}  // namespace

ComplexMatrix multiplier_section(const ImpedanceCoefficient& zeta, double s, std::size_t n) {
  require_s(s);
  return section_from(fourier_coeffs(zeta, 2 * n), s, n);
}

ExplicitOperator i_lambda(double s) {
  require_s(s);
  return ExplicitOperator{[s](long m, long n) {
                            return m == n ? cplx{0.0, std::pow(1.0 + double(n) * double(n), s)}
                                          : cplx{};
                          },
                          "i*Lambda"};
}

ComplexMatrix operator_section(const ExplicitOperator& op, double s, std::size_t n) {
  require_s(s);
  if (!op.entry) throw InvalidInput("explicit operator has no entries");
  const long nn = static_cast<long>(n);
  const SobolevScale sc = SobolevScale::make(s, n);
  ComplexMatrix b(2 * n + 1, 2 * n + 1);
  for (long m = -nn; m <= nn; ++m)
    for (long j = -nn; j <= nn; ++j)
      b(static_cast<std::size_t>(m + nn), static_cast<std::size_t>(j + nn)) =
          op.entry(m, j) / (sc.weight(m) * sc.weight(j));
  return b;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::compact:
      return "compact";
    case Verdict::non_compact:
      return "non-compact";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

const std::vector<std::size_t>& default_schedule() {
  static const std::vector<std::size_t> s{16, 32, 64, 128};
  return s;
}

namespace {

void check_schedule(const std::vector<std::size_t>& schedule) {
  if (schedule.size() < 3) throw InvalidInput("schedule needs at least three sections");
  if (schedule.front() == 0) throw InvalidInput("section sizes must be positive");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw InvalidInput("schedule must be strictly increasing");
}

template <class Build>
CompactnessReport run_gate(Build&& build, double s, const std::vector<std::size_t>& schedule,
                           const GateThresholds& th) {
  require_s(s);
  check_schedule(schedule);
  CompactnessReport r;
  r.s = s;
  r.sections = schedule;
  r.thresholds = th;
  const std::size_t count = schedule.size();
  r.singular_profiles.resize(count);
  r.accretivity_defect.resize(count);
  parallel_for(count, [&](std::size_t i) {
    const ComplexMatrix b = build(schedule[i]);
    r.singular_profiles[i] = linalg::singular_values(b);
    r.accretivity_defect[i] = linalg::hermitian_eig(b.hermitian_part(), false).values.front();
  });

  for (std::size_t i = 0; i < count; ++i) {
    const auto& p = r.singular_profiles[i];
    const std::size_t mid = (schedule[i] + 1) / 2;  // 1-based index ceil(N/2)
    r.tail_indicator.push_back(p.front() > 0.0 ? p[mid - 1] / p.front() : 0.0);
  }
  bool monotone = true, fast = true;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double a = r.tail_indicator[i], b = r.tail_indicator[i + 1];
    const double rate =
        b > 0.0 ? std::log(a / b) / std::log(double(schedule[i + 1]) / double(schedule[i]))
                : std::numeric_limits<double>::infinity();
    r.decay_rates.push_back(rate);
    monotone = monotone && b <= (1.0 + th.monotone_slack) * a;
    fast = fast && rate >= th.min_rate;
  }

  const bool all_high = std::all_of(r.tail_indicator.begin(), r.tail_indicator.end(),
                                    [&](double t) { return t > th.theta_n; });
  if (all_high) {
    r.verdict = Verdict::non_compact;
    r.rule = "non-compact (heuristic): tail above theta_n on every section";
  } else if (monotone && r.tail_indicator.back() < th.theta_c) {
    r.verdict = Verdict::compact;
    r.rule = "tail below theta_c and decreasing";
  } else if (monotone && fast) {
    r.verdict = Verdict::compact;
    r.rule = "tail decreasing with decay exponent >= min_rate (heuristic)";
  } else {
    r.verdict = Verdict::inconclusive;
    r.rule = "no rule fired";
  }
  return r;
}

}  // namespace

CompactnessReport compactness_gate(const ImpedanceCoefficient& zeta, double s,
                                   const std::vector<std::size_t>& schedule,
                                   const GateThresholds& th) {
  require_s(s);
  check_schedule(schedule);
  // One coefficient table serves every section.
  const std::vector<cplx> coeffs = fourier_coeffs(zeta, 2 * schedule.back());
  return run_gate([&](std::size_t n) { return section_from(coeffs, s, n); }, s, schedule, th);
}

CompactnessReport compactness_gate(const ExplicitOperator& op, double s,
                                   const std::vector<std::size_t>& schedule,
                                   const GateThresholds& th) {
  return run_gate([&](std::size_t n) { return operator_section(op, s, n); }, s, schedule, th);
}

namespace {

// int_{-pi}^{pi} |zeta|^q; +inf when divergent.
double lq_integral(const ImpedanceCoefficient& zeta, double q) {
  switch (zeta.kind) {
    case CoeffKind::constant:
      return 2.0 * kPi * std::pow(std::abs(zeta.value), q);
    case CoeffKind::power_singular: {
      const double b = zeta.a * q;
      if (b >= 1.0) return std::numeric_limits<double>::infinity();
      const double one_side = graded_integral(
          b, 0.0, [](double) { return 1.0; },
          [&](double eps) { return std::pow(eps, 1.0 - b) / (1.0 - b); });
      return 2.0 * std::pow(std::abs(zeta.strength), q) * one_side;
    }
    default: {
      std::vector<cplx> scratch;
      const auto& v = grid_values(zeta, scratch);
      double sum = 0.0;
      for (const cplx x : v) sum += std::pow(std::abs(x), q);
      return 2.0 * kPi * sum / static_cast<double>(v.size());
    }
  }
}

}  // namespace

LqReport lq_report(const ImpedanceCoefficient& zeta, double q, double s,
                   const std::vector<std::size_t>& schedule) {
  if (!(q >= 1.0)) throw InvalidInput("q must be at least 1");
  require_s(s);
  zeta.validate();
  LqReport r;
  r.q = q;
  const double integral = lq_integral(zeta, q);
  r.finite = std::isfinite(integral);
  r.lq_norm = r.finite ? std::pow(integral, 1.0 / q) : std::numeric_limits<double>::infinity();
  r.accretive = zeta.min_real_part() >= -1e-12;
  r.theorem_applies = r.finite && q > 1.0 && r.accretive;
  if (!r.finite || r.lq_norm == 0.0) {
    r.holder_ratio = r.finite ? 0.0 : std::numeric_limits<double>::infinity();
    return r;
  }
  if (schedule.empty()) return r;
  const std::size_t nmax = *std::max_element(schedule.begin(), schedule.end());
  const std::vector<cplx> coeffs = fourier_coeffs(zeta, 2 * nmax);
  std::vector<double> norms(schedule.size());
  parallel_for(schedule.size(), [&](std::size_t i) {
    norms[i] = linalg::spectral_norm(section_from(coeffs, s, schedule[i]));
  });
  r.holder_ratio = *std::max_element(norms.begin(), norms.end()) / r.lq_norm;
  return r;
}

}  // namespace gibc::sobolev
