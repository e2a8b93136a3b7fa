#pragma once

// P1 finite elements for the damped acoustic eigenproblem
//   -div(alpha^{-1} grad p) = lambda^2 beta p in Omega,
//   (alpha^{-1} grad p) . n = i lambda zeta p on the boundary.
// The weak form  K p - i lambda C p = lambda^2 M p  is solved as the QEP
//   lambda^2 M p + i lambda C p - K p = 0,
// so Re zeta >= 0 keeps the spectrum in the closed lower half-plane.

#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gibc/linalg.hpp"
#include "gibc/spectrum.hpp"

namespace gibc::fem {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::Vector;

struct Point {
  double x = 0.0, y = 0.0;
};

struct BoundaryEdge {
  std::size_t a = 0, b = 0;
  int label = 0;
};

struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<BoundaryEdge> boundary;

  std::size_t num_vertices() const { return vertices.size(); }
  double area(std::size_t t) const;
  std::vector<int> labels() const;
  // Throws InvalidInput when an invariant fails.
  void validate() const;
};

// Unit square with labels 0 bottom, 1 right, 2 top, 3 left.
Mesh square_mesh(std::size_t n);
Mesh rectangle_mesh(std::size_t nx, std::size_t ny, double lx, double ly);
// Concentric rings inside the unit circle, ring k carrying about
// n_theta * k / n_r vertices; the outer polygon is inscribed. Label 0.
Mesh disk_polygon_mesh(std::size_t n_r, std::size_t n_theta);

// Text format:
//   mesh2d v1
//   <vertex count>
//   v x y         (one per vertex)
//   t i j k       (triangles)
//   b i j label   (boundary edges)
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& m);

struct MeshShape {
  std::string kind = "square";  // square | rectangle | disk | file
  std::size_t n = 8;            // square / disk rings
  std::size_t nx = 8, ny = 8;
  double lx = 1.0, ly = 1.0;
  std::size_t n_theta = 32;
  std::string path;
};
Mesh build_mesh(const MeshShape& shape);

struct MaterialCoefficients {
  // Per triangle, or a single entry used everywhere.
  std::vector<std::array<double, 4>> alpha_inv{{1.0, 0.0, 0.0, 1.0}};  // row-major 2x2
  std::vector<double> beta{1.0};

  void validate(std::size_t n_triangles) const;
};

struct BoundaryZeta {
  std::map<int, cplx> constant;
  std::map<int, std::function<cplx(double, double)>> sampled;  // zeta(x, y)

  static BoundaryZeta uniform(const Mesh& m, cplx z);
  bool defined(int label) const { return constant.count(label) || sampled.count(label); }
  // Exactly zero on every labelled segment.
  bool identically_zero() const;
  double min_real(const Mesh& m) const;
};

struct QepMatrices {
  ComplexMatrix k_stiff;
  ComplexMatrix c_bdry;
  ComplexMatrix m_mass;
  bool zeta_zero = false;
};

QepMatrices assemble(const Mesh& mesh, const MaterialCoefficients& mat, const BoundaryZeta& zeta);

enum class QepRoute { energy, companion };

struct QepSpectrum : SpectrumReport {
  std::vector<cplx> all_eigenvalues;
  std::string route;
  std::size_t kernel_dim = 0;  // dimension of ker K
};

// Reports the n_want eigenvalues of smallest modulus (all when n_want = 0)
// with eigenvector residuals; all_eigenvalues holds the full spectrum.
QepSpectrum solve_qep(const QepMatrices& q, std::size_t n_want, QepRoute route = QepRoute::energy);

double qep_residual(const QepMatrices& q, cplx lambda, std::span<const cplx> p);

struct MarchState {
  Vector u, p;
};

struct EnergyTrace {
  std::vector<double> time;
  std::vector<double> energy;
  double max_relative_increase = 0.0;  // max_n (E_{n+1} - E_n) / E_0
};

double energy(const QepMatrices& q, const MarchState& s);
// Crank-Nicolson for u' = p, M p' = -K u - C p.
EnergyTrace cn_energy_march(const QepMatrices& q, MarchState initial, double dt, std::size_t steps);
MarchState random_state(const QepMatrices& q, std::uint64_t seed);

struct ConvergenceRow {
  double h = 0.0;
  std::size_t dofs = 0;
  cplx reference;
  cplx computed;
  double error = 0.0;
  bool matched = true;
  double observed_order = 0.0;  // against the previous row; 0 on the first
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<std::string> notes;
};

// Levels are shapes of increasing resolution; h is the longest mesh edge.
ConvergenceTable convergence_study(const std::vector<MeshShape>& levels, const BoundaryZeta& zeta,
                                   const std::vector<cplx>& reference);

double max_edge_length(const Mesh& m);

}  // namespace gibc::fem
