#include <algorithm>
#include <cmath>
#include <limits>

#include "gibc/errors.hpp"
#include "gibc/fem2d.hpp"

namespace gibc::fem {

namespace {

const cplx kI{0.0, 1.0};

bool is_real(const ComplexMatrix& m) {
  return std::all_of(m.values().begin(), m.values().end(), [](cplx z) { return z.imag() == 0.0; });
}

bool is_imaginary(const ComplexMatrix& m) {
  return std::all_of(m.values().begin(), m.values().end(), [](cplx z) { return z.real() == 0.0; });
}

linalg::RealMatrix real_part(const ComplexMatrix& m) {
  linalg::RealMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).real();
  return r;
}

// Lower bound on ||m||_2 by power iteration on m* m; exact for small sizes.
// A lower bound keeps the relative residual conservative.
double norm_estimate(const ComplexMatrix& m) {
  if (m.rows() <= 300) return m.empty() ? 0.0 : linalg::spectral_norm(m);
  Vector x(m.cols());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 + 0.37 * std::sin(1.7 * double(i));
  double est = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double nx = linalg::norm2(x);
    if (nx == 0.0) return 0.0;
    for (auto& v : x) v /= nx;
    const Vector y = m * x;
    est = linalg::norm2(y);
    x = m.adjoint() * y;
  }
  return est;
}

struct Norms {
  double k, c, m;
};

double residual_with(const QepMatrices& q, const Norms& n, cplx lambda, std::span<const cplx> p) {
  const Vector kp = q.k_stiff * p, cp = q.c_bdry * p, mp = q.m_mass * p;
  double r = 0.0;
  for (std::size_t i = 0; i < kp.size(); ++i)
    r += std::norm(lambda * lambda * mp[i] + kI * lambda * cp[i] - kp[i]);
  const double al = std::abs(lambda);
  const double denom = (al * al * n.m + al * n.c + n.k) * linalg::norm2(p);
  return denom > 0.0 ? std::sqrt(r) / denom : std::sqrt(r);
}

// Eigenvector of the QEP at a computed eigenvalue by shifted inverse iteration.
Vector qep_vector(const QepMatrices& q, cplx lambda) {
  const std::size_t n = q.k_stiff.rows();
  double delta = 1e-10 * (1.0 + std::abs(lambda));
  for (int attempt = 0; attempt < 6; ++attempt, delta *= 100.0) {
    const cplx s = lambda + cplx{delta, delta};
    const ComplexMatrix qs = (s * s) * q.m_mass + (kI * s) * q.c_bdry - q.k_stiff;
    const linalg::LuFactor lu(qs);
    if (lu.singular()) continue;
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = cplx{1.0 + 0.3 * std::cos(1.3 * double(i)), 0.2 * std::sin(0.7 * double(i))};
    for (int it = 0; it < 3; ++it) {
      x = lu.solve(x);
      const double nx = linalg::norm2(x);
      if (!(nx > 0.0) || !std::isfinite(nx)) break;
      for (auto& v : x) v /= nx;
    }
    if (std::isfinite(linalg::norm2(x))) return x;
  }
  throw NumericalFailure("inverse iteration failed for an eigenvalue");
}

struct RawSpectrum {
  std::vector<cplx> values;
  std::vector<Vector> p;  // empty when vectors were not requested
};

RawSpectrum energy_route(const QepMatrices& q, bool want_vectors, std::size_t& kernel_dim) {
  const std::size_t n = q.k_stiff.rows();
  // K = Q diag(mu) Q*, kernel removed.
  std::vector<double> mu;
  ComplexMatrix qk;
  if (is_real(q.k_stiff)) {
    auto e = linalg::real_symmetric_eig(real_part(q.k_stiff), true);
    mu = e.values;
    qk = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) qk(i, j) = e.vectors(i, j);
  } else {
    auto e = linalg::hermitian_eig(q.k_stiff, true);
    mu = e.values;
    qk = e.vectors;
  }
  const double top = std::max(std::abs(mu.front()), std::abs(mu.back()));
  if (mu.front() < -1e-10 * top) throw InvalidInput("stiffness matrix is not positive semidefinite");
  kernel_dim = static_cast<std::size_t>(
      std::count_if(mu.begin(), mu.end(), [&](double v) { return v <= 1e-10 * top; }));
  const std::size_t r = n - kernel_dim;
  ComplexMatrix rr(r, n);
  for (std::size_t k = 0; k < r; ++k) {
    const double s = std::sqrt(mu[kernel_dim + k]);
    for (std::size_t j = 0; j < n; ++j) rr(k, j) = s * std::conj(qk(j, kernel_dim + k));
  }
  const linalg::GramMatrix gm(q.m_mass);
  const ComplexMatrix s = gm.right_factor_solve(rr);
  // C~ = U^{-*} C U^{-1} where M = U* U.
  auto congruence = [&](const ComplexMatrix& c) {
    return gm.right_factor_solve(gm.right_factor_solve(c).adjoint()).adjoint();
  };
  const std::size_t big = r + n;

  RawSpectrum out;
  auto recover = [&](const ComplexMatrix& b_block) {
    // Columns of b_block hold the lower (b) components; p = U^{-1} b.
    const ComplexMatrix p = gm.factor_solve(b_block);
    for (std::size_t j = 0; j < p.cols(); ++j) out.p.push_back(p.col(j));
  };

  const bool real_km = is_real(q.k_stiff) && is_real(q.m_mass);
  if (real_km && is_imaginary(q.c_bdry)) {
    // C = i D: T = [[0, S], [S^T, D~]] is real symmetric.
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d(i, j) = q.c_bdry(i, j).imag();
    const ComplexMatrix dt = congruence(d);
    linalg::RealMatrix t(big, big);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < n; ++j) t(i, r + j) = t(r + j, i) = s(i, j).real();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t(r + i, r + j) = 0.5 * (dt(i, j).real() + dt(j, i).real());
    auto e = linalg::real_symmetric_eig(t, want_vectors);
    for (double v : e.values) out.values.emplace_back(v, 0.0);
    if (want_vectors) {
      ComplexMatrix b(n, big);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < big; ++j) b(i, j) = e.vectors(r + i, j);
      recover(b);
    }
    return out;
  }
  const ComplexMatrix ct = congruence(q.c_bdry);
  if (real_km && is_real(q.c_bdry)) {
    // diag(I, iI)^{-1} T diag(I, iI) = i A with A = [[0, S], [-S^T, -C~]] real.
    linalg::RealMatrix a(big, big);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        a(i, r + j) = s(i, j).real();
        a(r + j, i) = -s(i, j).real();
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(r + i, r + j) = -ct(i, j).real();
    auto e = linalg::real_eig(a, want_vectors);
    for (cplx v : e.values) out.values.push_back(kI * v);
    if (want_vectors) {
      ComplexMatrix b(n, big);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < big; ++j) b(i, j) = kI * e.vectors(r + i, j);
      recover(b);
    }
    return out;
  }
  ComplexMatrix t(big, big);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      t(i, r + j) = s(i, j);
      t(r + j, i) = std::conj(s(i, j));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t(r + i, r + j) = -kI * ct(i, j);
  auto e = linalg::eig(t, want_vectors);
  out.values = e.values;
  if (want_vectors) {
    ComplexMatrix b(n, big);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < big; ++j) b(i, j) = e.vectors(r + i, j);
    recover(b);
  }
  return out;
}

RawSpectrum companion_route(const QepMatrices& q) {
  const std::size_t n = q.k_stiff.rows();
  const auto id = ComplexMatrix::identity(n);
  ComplexMatrix a(2 * n, 2 * n), b(2 * n, 2 * n);
  a.set_block(0, n, id);
  a.set_block(n, 0, q.k_stiff);
  a.set_block(n, n, -kI * q.c_bdry);
  b.set_block(0, 0, id);
  b.set_block(n, n, q.m_mass);
  auto e = linalg::solve_pencil(a, b);
  RawSpectrum out;
  out.values = e.values;
  for (std::size_t j = 0; j < e.values.size(); ++j) {
    Vector p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = e.vectors(i, j);
    out.p.push_back(std::move(p));
  }
  return out;
}

bool nearly_constant(std::span<const cplx> p) {
  cplx sum{};
  for (cplx v : p) sum += v;
  const double np = linalg::norm2(p);
  return np > 0.0 && std::abs(sum) / (std::sqrt(double(p.size())) * np) > 1.0 - 1e-6;
}

}  // namespace

double qep_residual(const QepMatrices& q, cplx lambda, std::span<const cplx> p) {
  const Norms n{norm_estimate(q.k_stiff), norm_estimate(q.c_bdry), norm_estimate(q.m_mass)};
  return residual_with(q, n, lambda, p);
}

QepSpectrum solve_qep(const QepMatrices& q, std::size_t n_want, QepRoute route) {
  const std::size_t n = q.k_stiff.rows();
  if (n == 0 || !q.k_stiff.square() || q.c_bdry.rows() != n || q.c_bdry.cols() != n ||
      q.m_mass.rows() != n || q.m_mass.cols() != n)
    throw InvalidInput("QEP matrices are inconsistent");
  if ((q.k_stiff - q.k_stiff.adjoint()).max_abs() > 1e-12 * q.k_stiff.max_abs())
    throw InvalidInput("stiffness matrix is not Hermitian");
  if (!q.k_stiff.all_finite() || !q.c_bdry.all_finite() || !q.m_mass.all_finite())
    throw InvalidInput("QEP matrices contain non-finite entries");

  QepSpectrum rep;
  RawSpectrum raw;
  if (route == QepRoute::energy) {
    const std::size_t big = 2 * n;  // upper bound on the realization size
    raw = energy_route(q, n_want == 0 || n_want >= big, rep.kernel_dim);
    rep.route = "energy";
    if (rep.kernel_dim != 1)
      rep.notes.push_back("stiffness kernel has dimension " + std::to_string(rep.kernel_dim));
  } else {
    raw = companion_route(q);
    rep.route = "companion";
  }

  const Norms norms{norm_estimate(q.k_stiff), norm_estimate(q.c_bdry), norm_estimate(q.m_mass)};
  std::vector<std::size_t> order(raw.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(raw.values[a]), mb = std::abs(raw.values[b]);
    if (ma != mb) return ma < mb;
    return raw.values[a].real() < raw.values[b].real();
  });

  std::size_t reported = 0, artifacts = 0;
  for (std::size_t idx : order) {
    const cplx lambda = raw.values[idx];
    Eigenvalue ev{lambda, 0.0, "", 1, false};
    const bool tiny = std::abs(lambda) < 1e-8;
    if (route == QepRoute::companion && tiny && !q.zeta_zero && nearly_constant(raw.p[idx])) {
      ev.artifact = true;
      ev.tag = "quotient-artifact";
      ++artifacts;
    } else {
      rep.all_eigenvalues.push_back(lambda);
    }
    if (ev.artifact || n_want == 0 || reported < n_want) {
      if (!ev.artifact) {
        ev.tag = tiny && q.zeta_zero ? "constant-mode" : "k=" + std::to_string(reported);
        ++reported;
      }
      const Vector p = raw.p.empty() ? qep_vector(q, lambda) : raw.p[idx];
      ev.residual = residual_with(q, norms, lambda, p);
      rep.values.push_back(std::move(ev));
    }
  }
  if (artifacts > 0)
    rep.notes.push_back(std::to_string(artifacts) + " lambda = 0 mode(s) tagged quotient-artifact");
  return rep;
}

}  // namespace gibc::fem
