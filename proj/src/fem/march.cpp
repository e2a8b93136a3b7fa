#include <cmath>
#include <random>

#include "gibc/errors.hpp"
#include "gibc/fem2d.hpp"

namespace gibc::fem {

double energy(const QepMatrices& q, const MarchState& s) {
  return linalg::dot(q.k_stiff * s.u, s.u).real() + linalg::dot(q.m_mass * s.p, s.p).real();
}

namespace {

// Removes the M-weighted mean, i.e. the component along ker K.
void deflate(const QepMatrices& q, Vector& u) {
  const std::size_t n = u.size();
  const Vector ones(n, cplx{1.0, 0.0});
  const Vector m1 = q.m_mass * ones;
  cplx num{}, den{};
  for (std::size_t i = 0; i < n; ++i) {
    num += m1[i] * u[i];
    den += m1[i];
  }
  const cplx c = num / den;
  for (auto& v : u) v -= c;
}

}  // namespace

MarchState random_state(const QepMatrices& q, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  const std::size_t n = q.k_stiff.rows();
  MarchState s{Vector(n), Vector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    s.u[i] = {nd(gen), nd(gen)};
    s.p[i] = {nd(gen), nd(gen)};
  }
  deflate(q, s.u);
  return s;
}

EnergyTrace cn_energy_march(const QepMatrices& q, MarchState s, double dt, std::size_t steps) {
  const std::size_t n = q.k_stiff.rows();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("time step must be positive");
  if (s.u.size() != n || s.p.size() != n) throw InvalidInput("initial state has the wrong size");
  deflate(q, s.u);

  // Eliminating u_{n+1} = u_n + dt/2 (p_n + p_{n+1}) leaves
  //   (M + dt^2/4 K + dt/2 C) p_{n+1} = (M - dt^2/4 K - dt/2 C) p_n - dt K u_n.
  const double a = 0.25 * dt * dt, b = 0.5 * dt;
  const ComplexMatrix lhs = q.m_mass + a * q.k_stiff + b * q.c_bdry;
  const ComplexMatrix rhs = q.m_mass - a * q.k_stiff - b * q.c_bdry;
  const linalg::LuFactor lu(lhs);
  if (lu.singular() || lu.rcond() < 1e-14) throw NumericalFailure("Crank-Nicolson matrix is singular");

  EnergyTrace tr;
  tr.time.reserve(steps + 1);
  tr.energy.reserve(steps + 1);
  tr.time.push_back(0.0);
  tr.energy.push_back(energy(q, s));
  for (std::size_t k = 1; k <= steps; ++k) {
    Vector r = rhs * s.p;
    const Vector ku = q.k_stiff * s.u;
    for (std::size_t i = 0; i < n; ++i) r[i] -= dt * ku[i];
    Vector pn = lu.solve(r);
    for (std::size_t i = 0; i < n; ++i) s.u[i] += b * (s.p[i] + pn[i]);
    s.p = std::move(pn);
    const double e = energy(q, s);
    const double prev = tr.energy.back();
    if (prev > 0.0) tr.max_relative_increase = std::max(tr.max_relative_increase, (e - prev) / prev);
    tr.time.push_back(dt * static_cast<double>(k));
    tr.energy.push_back(e);
  }
  return tr;
}

}  // namespace gibc::fem
