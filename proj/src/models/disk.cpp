#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "gibc/errors.hpp"
#include "gibc/model_problems.hpp"
#include "gibc/parallel.hpp"

namespace gibc::models {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
constexpr std::size_t kMinContourPoints = 2048;
constexpr double kNearRoot = 1e-6;
constexpr double kPerturb = 1e-4;
constexpr int kMaxRetries = 5;

// h(lambda) / lambda^nu and its logarithmic derivative.
struct Reduced {
  int m;
  cplx zeta;
  int nu;

  struct Value {
    cplx f;
    cplx log_deriv;
  };

  Value operator()(cplx lambda) const {
    const BesselValue b = bessel_j(m, lambda);
    const cplx j = b.value, dj = b.derivative;
    const double mm = static_cast<double>(m) * m;
    const cplx ddj = -dj / lambda - (1.0 - mm / (lambda * lambda)) * j;
    const cplx h = kI * zeta * j - dj;
    const cplx dh = kI * zeta * dj - ddj;
    const cplx f = nu == 0 ? h : h / std::pow(lambda, nu);
    return {f, dh / h - static_cast<double>(nu) / lambda};
  }
};

struct Count {
  bool ok = false;
  long count = 0;
};

struct Sample {
  cplx z;
  Reduced::Value v;
};

// Argument principle on the rectangle. A base grid of at least 2048 points is
// refined by bisection wherever the phase of f or |dz f'/f| changes too much
// between neighbours, so roots close to the contour are resolved. The
// trapezoid integral of f'/f and the accumulated winding must agree.
class ContourCounter {
 public:
  explicit ContourCounter(const Reduced& f) : f_(f) {}

  Count operator()(const Box& b) {
    const double w = b.re_max - b.re_min, h = b.im_max - b.im_min;
    const cplx corners[4] = {{b.re_min, b.im_min}, {b.re_max, b.im_min}, {b.re_max, b.im_max},
                             {b.re_min, b.im_max}};
    const double lengths[4] = {w, h, w, h};
    integral_ = 0.0;
    winding_ = 0.0;
    budget_ = 1 << 20;
    bad_ = false;
    std::optional<Sample> prev;
    for (int side = 0; side < 4 && !bad_; ++side) {
      const cplx a = corners[side], e = corners[(side + 1) % 4];
      const auto pts = std::max<std::size_t>(
          16, static_cast<std::size_t>(
                  std::ceil(kMinContourPoints * lengths[side] / (2 * (w + h)))));
      const cplx step = (e - a) / static_cast<double>(pts);
      for (std::size_t k = side == 0 ? 0 : 1; k <= pts && !bad_; ++k) {
        const Sample s = sample(a + static_cast<double>(k) * step);
        if (prev && !bad_) segment(*prev, s, 0);
        prev = s;
      }
    }
    if (bad_) return {};
    const double n_int = integral_ / (2.0 * kPi);
    const double n_wind = winding_ / (2.0 * kPi);
    const long rounded = std::lround(n_wind);
    if (std::abs(n_wind - rounded) > 1e-6 || std::abs(n_int - rounded) > 0.05) return {};
    return {true, rounded};
  }

 private:
  Sample sample(cplx z) {
    if (std::abs(z) < kNearRoot) {
      bad_ = true;
      return {z, {}};
    }
    const auto v = f_(z);
    if (!std::isfinite(std::abs(v.f)) || !std::isfinite(std::abs(v.log_deriv)) ||
        v.f == cplx{} || 1.0 / std::abs(v.log_deriv) < kNearRoot)
      bad_ = true;
    return {z, v};
  }

  void segment(const Sample& a, const Sample& b, int depth) {
    if (bad_) return;
    const cplx dz = b.z - a.z;
    const double dphi = std::arg(b.v.f / a.v.f);
    const double swing =
        std::abs(dz) * std::max(std::abs(a.v.log_deriv), std::abs(b.v.log_deriv));
    if (std::abs(dphi) > kPi / 4.0 || swing > 0.25) {
      if (depth > 40 || --budget_ <= 0) {
        bad_ = true;
        return;
      }
      const Sample m = sample(0.5 * (a.z + b.z));
      segment(a, m, depth + 1);
      segment(m, b, depth + 1);
      return;
    }
    integral_ += (0.5 * dz * (a.v.log_deriv + b.v.log_deriv)).imag();
    winding_ += dphi;
  }

  const Reduced& f_;
  double integral_ = 0.0, winding_ = 0.0;
  long budget_ = 0;
  bool bad_ = false;
};

Count contour_count(const Reduced& f, const Box& b) { return ContourCounter(f)(b); }

std::optional<cplx> newton(const Reduced& f, cplx z) {
  for (int it = 0; it < 80; ++it) {
    const auto v = f(z);
    if (!std::isfinite(std::abs(v.log_deriv)) || v.log_deriv == cplx{}) return std::nullopt;
    cplx step = 1.0 / v.log_deriv;
    if (std::abs(step) > 1.0) step /= std::abs(step);
    z -= step;
    if (std::abs(z) < kNearRoot) return std::nullopt;
    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) return z;
  }
  return z;
}

Box expand(const Box& b, double d) {
  return {b.re_min - d, b.re_max + d, b.im_min - d, b.im_max + d};
}

struct Searcher {
  const Reduced& f;
  std::vector<cplx> roots;

  void search(const Box& b, long count, int depth) {
    if (count <= 0) return;
    const cplx centre{0.5 * (b.re_min + b.re_max), 0.5 * (b.im_min + b.im_max)};
    const double diam = std::hypot(b.re_max - b.re_min, b.im_max - b.im_min);
    if (count == 1 || diam < 1e-9 || depth > 40) {
      if (auto r = newton(f, centre); r && b.contains(*r, 1e-3 * diam + 1e-12)) {
        for (long k = 0; k < count; ++k) roots.push_back(*r);
        return;
      }
      if (diam < 1e-9 || depth > 40) throw NumericalFailure("root polishing failed in a small cell");
    }
    // Split at a slightly off-centre point; shift it if a root sits on a cut.
    for (int attempt = 0; attempt < 8; ++attempt) {
      const double t = 0.5 + 0.0371 * attempt;
      const double xs = b.re_min + t * (b.re_max - b.re_min);
      const double ys = b.im_min + (1.0 - t) * (b.im_max - b.im_min);
      const Box kids[4] = {{b.re_min, xs, b.im_min, ys},
                           {xs, b.re_max, b.im_min, ys},
                           {b.re_min, xs, ys, b.im_max},
                           {xs, b.re_max, ys, b.im_max}};
      Count c[4];
      bool ok = true;
      long sum = 0;
      for (int k = 0; k < 4 && ok; ++k) {
        c[k] = contour_count(f, kids[k]);
        ok = c[k].ok;
        sum += c[k].count;
      }
      if (!ok || sum != count) continue;
      for (int k = 0; k < 4; ++k) search(kids[k], c[k].count, depth + 1);
      return;
    }
    throw NumericalFailure("could not subdivide a root cell");
  }
};

}  // namespace

cplx disk_characteristic(int m, cplx zeta, cplx lambda) {
  const BesselValue b = bessel_j(m, lambda);
  return kI * zeta * b.value - b.derivative;
}

int disk_zero_order(int m, cplx zeta) {
  if (m == 0) return zeta == cplx{} ? 1 : 0;
  return m - 1;
}

RootSearch disk_mode_roots(int m, cplx zeta, const Box& box) {
  if (m < 0) throw InvalidInput("angular index must be nonnegative");
  if (!(box.re_max > box.re_min && box.im_max > box.im_min)) throw InvalidInput("empty search box");
  if (std::max({std::abs(box.re_min), std::abs(box.re_max)}) + std::max(std::abs(box.im_min),
      std::abs(box.im_max)) > 190.0)
    throw InvalidInput("search box exceeds the Bessel range");
  const Reduced f{m, zeta, disk_zero_order(m, zeta)};
  RootSearch r;
  Box b = box;
  Count total;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    total = contour_count(f, b);
    if (total.ok) break;
    r.retries = attempt + 1;
    b = expand(box, kPerturb * (attempt + 1));
  }
  if (!total.ok) throw NumericalFailure("root-free contour not found after perturbation");
  r.box = b;
  r.contour_count = static_cast<std::size_t>(total.count);
  Searcher s{f, {}};
  s.search(b, total.count, 0);
  std::sort(s.roots.begin(), s.roots.end(), [](cplx a, cplx c) {
    return a.real() != c.real() ? a.real() < c.real() : a.imag() < c.imag();
  });
  r.roots = std::move(s.roots);
  for (const cplx z : r.roots) r.residuals.push_back(std::abs(disk_characteristic(m, zeta, z)));
  return r;
}

DiskReport disk_spectrum(const DiskSpec& spec) {
  if (spec.m_max < 0 || spec.m_max > 20) throw InvalidInput("m_max must lie in [0, 20]");
  if (spec.zeta.real() < 0.0 && !spec.allow_nonaccretive)
    throw InvalidInput("impedance must have Re zeta >= 0");
  DiskReport rep;
  rep.modes.resize(static_cast<std::size_t>(spec.m_max) + 1);
  parallel_for(rep.modes.size(), [&](std::size_t m) {
    rep.modes[m] = disk_mode_roots(static_cast<int>(m), spec.zeta, spec.box);
  });
  std::vector<cplx> all;
  for (std::size_t m = 0; m < rep.modes.size(); ++m) {
    const auto& mr = rep.modes[m];
    rep.counts_match = rep.counts_match && mr.contour_count == mr.roots.size();
    for (std::size_t k = 0; k < mr.roots.size(); ++k) {
      rep.values.push_back({mr.roots[k], mr.residuals[k],
                            "m=" + std::to_string(m) + ",k=" + std::to_string(k), m == 0 ? 1 : 2,
                            false});
      all.push_back(mr.roots[k]);
    }
  }
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      rep.min_gap = std::min(rep.min_gap, std::abs(all[i] - all[j]));
  rep.isolated = rep.min_gap > 1e-6;
  if (!rep.isolated) rep.notes.push_back("two roots closer than 1e-6");
  return rep;
}

}  // namespace gibc::models
