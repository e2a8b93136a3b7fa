#include <cmath>
#include <limits>

#include "gibc/errors.hpp"
#include "gibc/fem2d.hpp"

namespace gibc::fem {

void MaterialCoefficients::validate(std::size_t n_triangles) const {
  if (alpha_inv.size() != 1 && alpha_inv.size() != n_triangles)
    throw InvalidInput("alpha_inv must be global or per triangle");
  if (beta.size() != 1 && beta.size() != n_triangles)
    throw InvalidInput("beta must be global or per triangle");
  for (const auto& a : alpha_inv) {
    if (std::abs(a[1] - a[2]) > 1e-14 * (std::abs(a[1]) + 1.0))
      throw InvalidInput("alpha_inv must be symmetric");
    // Smallest eigenvalue of [[a, b], [b, d]].
    const double tr = 0.5 * (a[0] + a[3]);
    const double disc = std::hypot(0.5 * (a[0] - a[3]), a[1]);
    if (!(tr - disc >= 1e-10)) throw InvalidInput("alpha_inv must be positive definite");
  }
  for (double b : beta)
    if (!(b >= 1e-10)) throw InvalidInput("beta must be uniformly positive");
}

BoundaryZeta BoundaryZeta::uniform(const Mesh& m, cplx z) {
  BoundaryZeta bz;
  for (int l : m.labels()) bz.constant[l] = z;
  return bz;
}

bool BoundaryZeta::identically_zero() const {
  if (!sampled.empty()) return false;
  for (const auto& [l, z] : constant)
    if (z != cplx{}) return false;
  return true;
}

namespace {

// 3-point Gauss on [0, 1].
constexpr double kGaussT[3] = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
constexpr double kGaussW[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace

double BoundaryZeta::min_real(const Mesh& m) const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& e : m.boundary) {
    if (auto it = constant.find(e.label); it != constant.end()) {
      lo = std::min(lo, it->second.real());
      continue;
    }
    const auto& f = sampled.at(e.label);
    const Point &a = m.vertices[e.a], &b = m.vertices[e.b];
    for (double t : kGaussT) lo = std::min(lo, f(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)).real());
  }
  return lo;
}

QepMatrices assemble(const Mesh& mesh, const MaterialCoefficients& mat, const BoundaryZeta& zeta) {
  mesh.validate();
  mat.validate(mesh.triangles.size());
  for (int l : mesh.labels())
    if (!zeta.defined(l)) throw InvalidInput("impedance missing on boundary label " + std::to_string(l));
  const std::size_t n = mesh.num_vertices();
  QepMatrices q{ComplexMatrix(n, n), ComplexMatrix(n, n), ComplexMatrix(n, n), zeta.identically_zero()};

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point &p0 = mesh.vertices[tri[0]], &p1 = mesh.vertices[tri[1]], &p2 = mesh.vertices[tri[2]];
    const double area = mesh.area(t);
    // grad phi_i = perp(opposite edge) / (2 area)
    const double gx[3] = {(p1.y - p2.y) / (2 * area), (p2.y - p0.y) / (2 * area),
                          (p0.y - p1.y) / (2 * area)};
    const double gy[3] = {(p2.x - p1.x) / (2 * area), (p0.x - p2.x) / (2 * area),
                          (p1.x - p0.x) / (2 * area)};
    const auto& a = mat.alpha_inv[mat.alpha_inv.size() == 1 ? 0 : t];
    const double beta = mat.beta[mat.beta.size() == 1 ? 0 : t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double ax = a[0] * gx[j] + a[1] * gy[j], ay = a[2] * gx[j] + a[3] * gy[j];
        q.k_stiff(tri[i], tri[j]) += area * (gx[i] * ax + gy[i] * ay);
        q.m_mass(tri[i], tri[j]) += beta * area / 12.0 * (i == j ? 2.0 : 1.0);
      }
  }

  for (const auto& e : mesh.boundary) {
    const Point &a = mesh.vertices[e.a], &b = mesh.vertices[e.b];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    cplx local[2][2];
    if (auto it = zeta.constant.find(e.label); it != zeta.constant.end()) {
      const cplx z = it->second;
      local[0][0] = local[1][1] = z * len / 3.0;
      local[0][1] = local[1][0] = z * len / 6.0;
    } else {
      const auto& f = zeta.sampled.at(e.label);
      for (auto& r : local) r[0] = r[1] = 0.0;
      for (int g = 0; g < 3; ++g) {
        const double t = kGaussT[g];
        const cplx z = f(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        const double phi[2] = {1.0 - t, t};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) local[i][j] += kGaussW[g] * len * z * phi[i] * phi[j];
      }
    }
    const std::size_t idx[2] = {e.a, e.b};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) q.c_bdry(idx[i], idx[j]) += local[i][j];
  }
  return q;
}

}  // namespace gibc::fem
