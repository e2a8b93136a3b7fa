#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gibc/errors.hpp"
#include "gibc/fem2d.hpp"
#include "gibc/model_problems.hpp"
#include "support.hpp"

using namespace gibc;
using namespace gibc::fem;

namespace {

constexpr double kPi = std::numbers::pi;

Mesh single_triangle(Point a, Point b, Point c) {
  Mesh m;
  m.vertices = {a, b, c};
  m.triangles = {{0, 1, 2}};
  m.boundary = {{0, 1, 0}, {1, 2, 0}, {2, 0, 0}};
  return m;
}

double min_distance(cplx z, const std::vector<cplx>& set) {
  double best = 1e300;
  for (cplx w : set) best = std::min(best, std::abs(z - w));
  return best;
}

QepMatrices square_problem(std::size_t n, cplx zeta) {
  const Mesh m = square_mesh(n);
  return assemble(m, {}, BoundaryZeta::uniform(m, zeta));
}

}  // namespace

TEST_CASE("structured meshes") {
  auto s1 = square_mesh(1);
  CHECK(s1.num_vertices() == 4);
  CHECK(s1.triangles.size() == 2);
  CHECK(s1.boundary.size() == 4);
  auto s4 = square_mesh(4);
  CHECK(s4.num_vertices() == 25);
  CHECK(s4.triangles.size() == 32);
  CHECK_NOTHROW(s4.validate());
  CHECK(s4.labels() == std::vector<int>{0, 1, 2, 3});

  auto r = rectangle_mesh(3, 5, 2.0, 0.5);
  CHECK(r.num_vertices() == 24);
  double area = 0.0;
  for (std::size_t t = 0; t < r.triangles.size(); ++t) area += r.area(t);
  CHECK(area == doctest::Approx(1.0));

  auto d = disk_polygon_mesh(8, 32);
  CHECK_NOTHROW(d.validate());
  for (const auto& v : d.vertices) CHECK(std::hypot(v.x, v.y) <= 1.0 + 1e-15);
  CHECK(d.boundary.size() == 32);
  for (const auto& e : d.boundary) CHECK(std::hypot(d.vertices[e.a].x, d.vertices[e.a].y) == doctest::Approx(1.0));
}

TEST_CASE("mesh validation and file format") {
  auto bad = single_triangle({0, 0}, {0, 1}, {1, 0});  // clockwise
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  auto open = single_triangle({0, 0}, {1, 0}, {0, 1});
  open.boundary.pop_back();
  CHECK_THROWS_AS(open.validate(), InvalidInput);

  auto m = disk_polygon_mesh(3, 12);
  std::stringstream ss;
  write_mesh(ss, m);
  auto back = read_mesh(ss);
  CHECK(back.num_vertices() == m.num_vertices());
  CHECK(back.triangles == m.triangles);
  for (std::size_t i = 0; i < m.num_vertices(); ++i) {
    CHECK(back.vertices[i].x == m.vertices[i].x);
    CHECK(back.vertices[i].y == m.vertices[i].y);
  }

  std::istringstream broken("mesh2d v1\n3\nv 0 0\nv 1 0\nv 0 oops\n");
  try {
    read_mesh(broken);
    FAIL("expected a parse error");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
  std::istringstream header("mesh2d v2\n");
  CHECK_THROWS_AS(read_mesh(header), InvalidInput);
}

TEST_CASE("element matrices of a single triangle") {
  const Point a{0.2, 0.1}, b{1.3, 0.4}, c{0.5, 1.7};
  auto m = single_triangle(a, b, c);
  auto q = assemble(m, {}, BoundaryZeta::uniform(m, 0.0));
  // K_ij = (e_i . e_j) / (4 |T|) with e_i the edge opposite vertex i.
  const Point e[3] = {{c.x - b.x, c.y - b.y}, {a.x - c.x, a.y - c.y}, {b.x - a.x, b.y - a.y}};
  const double area = 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(q.k_stiff(i, j) - (e[i].x * e[j].x + e[i].y * e[j].y) / (4 * area)) < 1e-14);
      CHECK(std::abs(q.m_mass(i, j) - area / 12.0 * (i == j ? 2.0 : 1.0)) < 1e-15);
    }
  auto unit = single_triangle({0, 0}, {1, 0}, {0, 1});
  auto qu = assemble(unit, {}, BoundaryZeta::uniform(unit, 1.0));
  CHECK(qu.k_stiff(0, 0).real() == doctest::Approx(1.0));
  CHECK(qu.k_stiff(1, 1).real() == doctest::Approx(0.5));
  CHECK(std::abs(qu.k_stiff(1, 2)) < 1e-15);
  // Sum of the boundary matrix is the perimeter.
  cplx sum{};
  for (cplx v : qu.c_bdry.values()) sum += v;
  CHECK(sum.real() == doctest::Approx(2.0 + std::sqrt(2.0)));
}

TEST_CASE("anisotropic material uses alpha_inv") {
  auto m = single_triangle({0, 0}, {1, 0}, {0, 1});
  MaterialCoefficients mat;
  mat.alpha_inv = {{3.0, 0.0, 0.0, 1.0}};
  mat.beta = {2.0};
  auto q = assemble(m, mat, BoundaryZeta::uniform(m, 0.0));
  // grad phi_0 = (-1, -1): 0.5 * (3 + 1)
  CHECK(q.k_stiff(0, 0).real() == doctest::Approx(2.0));
  CHECK(q.m_mass(0, 0).real() == doctest::Approx(2.0 * 0.5 / 6.0));
  mat.alpha_inv = {{1.0, 2.0, 2.0, 1.0}};
  CHECK_THROWS_AS(assemble(m, mat, BoundaryZeta::uniform(m, 0.0)), InvalidInput);
  mat.alpha_inv = {{1.0, 0.0, 0.0, 1.0}};
  mat.beta = {0.0};
  CHECK_THROWS_AS(assemble(m, mat, BoundaryZeta::uniform(m, 0.0)), InvalidInput);
}

TEST_CASE("assembled matrices on the square") {
  auto q0 = square_problem(6, 0.0);
  CHECK(q0.c_bdry.max_abs() == 0.0);
  CHECK(q0.zeta_zero);
  const linalg::Vector ones(q0.k_stiff.rows(), 1.0);
  CHECK(linalg::norm2(q0.k_stiff * ones) < 1e-12);
  auto ek = linalg::hermitian_eig(q0.k_stiff, false).values;
  CHECK(std::abs(ek[0]) < 1e-10);
  CHECK(ek[1] > 1e-3);
  CHECK(linalg::hermitian_eig(q0.m_mass, false).values.front() > 0.0);
  cplx total{};
  for (cplx v : q0.m_mass.values()) total += v;
  CHECK(total.real() == doctest::Approx(1.0));

  auto qi = square_problem(6, cplx{0.0, 1.0});
  CHECK(qi.c_bdry.hermitian_part().max_abs() < 1e-12);
  auto q1 = square_problem(6, cplx{0.7, -0.4});
  CHECK(linalg::hermitian_eig(q1.c_bdry.hermitian_part(), false).values.front() >= -1e-14);

  const Mesh m = square_mesh(4);
  BoundaryZeta partial;
  partial.constant = {{0, 1.0}, {1, 0.0}, {2, 0.0}};
  CHECK_THROWS_AS(assemble(m, {}, partial), InvalidInput);
}

TEST_CASE("sampled impedance uses exact edge quadrature") {
  const Mesh m = square_mesh(5);
  BoundaryZeta sampled, constant;
  for (int l : m.labels()) {
    sampled.sampled[l] = [](double, double) { return cplx{0.4, 0.2}; };
    constant.constant[l] = cplx{0.4, 0.2};
  }
  CHECK((assemble(m, {}, sampled).c_bdry - assemble(m, {}, constant).c_bdry).max_abs() < 1e-15);

  // Linear zeta = 1 + x on the bottom edge of a single triangle: the exact
  // integrals of (1 + x) phi_a phi_b over [0, 1].
  auto t = single_triangle({0, 0}, {1, 0}, {0, 1});
  t.boundary[0].label = 1;
  BoundaryZeta lin;
  lin.sampled[1] = [](double x, double) { return cplx{1.0 + x, 0.0}; };
  lin.constant[0] = 0.0;
  auto q = assemble(t, {}, lin);
  CHECK(q.c_bdry(0, 0).real() == doctest::Approx(1.0 / 3 + 1.0 / 12));
  CHECK(q.c_bdry(1, 1).real() == doctest::Approx(1.0 / 3 + 1.0 / 4));
  CHECK(q.c_bdry(0, 1).real() == doctest::Approx(1.0 / 6 + 1.0 / 12));
}

TEST_CASE("Neumann square spectrum") {
  auto q = square_problem(16, 0.0);
  auto s = solve_qep(q, 12);
  CHECK(s.kernel_dim == 1);
  REQUIRE(s.values.size() == 12);
  CHECK(std::abs(s.values[0].lambda) < 1e-8);
  CHECK(s.values[0].tag == "constant-mode");
  CHECK_FALSE(s.values[0].artifact);
  // lambda = +-pi sqrt(j^2 + k^2)
  const double exact[] = {kPi, kPi, kPi * std::sqrt(2.0), 2 * kPi, 2 * kPi};
  std::vector<double> positive;
  for (cplx l : s.all_eigenvalues)
    if (l.real() > 1e-6) positive.push_back(l.real());
  std::sort(positive.begin(), positive.end());
  for (int i = 0; i < 5; ++i) CHECK(std::abs(positive[i] - exact[i]) / exact[i] < 0.01);
  for (const auto& v : s.values) CHECK(v.residual <= 1e-8);
  for (cplx l : s.all_eigenvalues) {
    CHECK(std::abs(l.imag()) < 1e-8);
    CHECK(min_distance(-l, s.all_eigenvalues) < 1e-8);
  }
}

TEST_CASE("enclosure and selfadjoint cases") {
  for (cplx z : {cplx{1.0, 0.0}, cplx{0.3, 0.7}, cplx{2.0, -1.0}}) {
    auto s = solve_qep(square_problem(8, z), 10);
    CAPTURE(z);
    CHECK(s.max_imag() <= 1e-8);
    double worst = -1e9;
    for (cplx l : s.all_eigenvalues) worst = std::max(worst, l.imag());
    CHECK(worst <= 1e-8);
    for (const auto& v : s.values) CHECK(v.residual <= 1e-8);
  }
  for (double c : {0.5, -1.5}) {
    auto s = solve_qep(square_problem(8, cplx{0.0, c}), 10);
    for (cplx l : s.all_eigenvalues) CHECK(std::abs(l.imag()) < 1e-8);
    for (const auto& v : s.values) CHECK(v.residual <= 1e-8);
  }
  // Damping on a single edge.
  const Mesh m = square_mesh(8);
  BoundaryZeta one = BoundaryZeta::uniform(m, 0.0);
  one.constant[1] = 1.0;
  auto s = solve_qep(assemble(m, {}, one), 10);
  double worst = -1e9;
  for (cplx l : s.all_eigenvalues) worst = std::max(worst, l.imag());
  CHECK(worst <= 1e-8);
}

TEST_CASE("energy and companion routes agree") {
  for (cplx z : {cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.5}, cplx{0.4, 0.9}}) {
    CAPTURE(z);
    auto q = square_problem(5, z);
    auto e = solve_qep(q, 0);
    auto c = solve_qep(q, 0, QepRoute::companion);
    CHECK(e.all_eigenvalues.size() + 1 >= c.all_eigenvalues.size());
    for (cplx l : e.all_eigenvalues)
      if (std::abs(l) > 1e-6) CHECK(min_distance(l, c.all_eigenvalues) < 1e-8 * std::max(1.0, std::abs(l)));
    for (const auto& v : e.values) CHECK(v.residual <= 1e-8);
    for (const auto& v : c.values)
      if (!v.artifact) CHECK(v.residual <= 1e-8);
    std::size_t artifacts = 0;
    for (const auto& v : c.values) artifacts += v.artifact;
    CHECK(artifacts == (z == cplx{} ? 0u : 1u));
  }
}

TEST_CASE("artifact tagging with damping on part of the boundary") {
  const Mesh m = square_mesh(5);
  BoundaryZeta part = BoundaryZeta::uniform(m, 0.0);
  part.constant[2] = cplx{0.8, 0.3};
  auto q = assemble(m, {}, part);
  auto c = solve_qep(q, 0, QepRoute::companion);
  std::size_t artifacts = 0;
  for (const auto& v : c.values) artifacts += v.artifact;
  CHECK(artifacts == 1);
  auto e = solve_qep(q, 0);
  for (cplx l : e.all_eigenvalues)
    CHECK(min_distance(l, c.all_eigenvalues) < 1e-8 * std::max(1.0, std::abs(l)));
}

TEST_CASE("Crank-Nicolson energy march") {
  SUBCASE("conservative") {
    auto q = square_problem(8, 0.0);
    auto tr = cn_energy_march(q, random_state(q, 11), 1e-3, 2000);
    CHECK(std::abs(tr.energy.back() / tr.energy.front() - 1.0) < 1e-10);
  }
  SUBCASE("purely imaginary impedance conserves energy") {
    auto q = square_problem(8, cplx{0.0, 0.7});
    auto tr = cn_energy_march(q, random_state(q, 12), 1e-3, 500);
    CHECK(std::abs(tr.energy.back() / tr.energy.front() - 1.0) < 1e-10);
  }
  SUBCASE("damping on one edge decreases the energy") {
    const Mesh m = square_mesh(8);
    BoundaryZeta one = BoundaryZeta::uniform(m, 0.0);
    one.constant[0] = 1.0;
    auto q = assemble(m, {}, one);
    auto tr = cn_energy_march(q, random_state(q, 13), 1e-3, 2000);
    CHECK(tr.max_relative_increase <= 1e-12);
    CHECK(tr.energy.back() < tr.energy.front());
    for (std::size_t k = 1; k < tr.energy.size(); ++k)
      CHECK(tr.energy[k] <= tr.energy[k - 1] * (1 + 1e-12));
  }
  SUBCASE("zero state") {
    auto q = square_problem(4, 1.0);
    const std::size_t n = q.k_stiff.rows();
    auto tr = cn_energy_march(q, {linalg::Vector(n), linalg::Vector(n)}, 1e-2, 50);
    for (double e : tr.energy) CHECK(e == 0.0);
  }
  SUBCASE("adding a constant to u changes nothing") {
    auto q = square_problem(6, cplx{0.5, 0.2});
    auto s = random_state(q, 14);
    auto shifted = s;
    for (auto& v : shifted.u) v += cplx{3.0, -2.0};
    auto a = cn_energy_march(q, s, 2e-3, 200);
    auto b = cn_energy_march(q, shifted, 2e-3, 200);
    for (std::size_t k = 0; k < a.energy.size(); ++k)
      CHECK(std::abs(a.energy[k] - b.energy[k]) <= 1e-10 * a.energy[0]);
  }
  auto q = square_problem(4, 0.0);
  CHECK_THROWS_AS(cn_energy_march(q, random_state(q, 1), 0.0, 5), InvalidInput);
}

TEST_CASE("convergence study") {
  std::vector<MeshShape> levels;
  for (std::size_t n : {4u, 8u, 16u}) {
    MeshShape s;
    s.n = n;
    levels.push_back(s);
  }
  auto t = convergence_study(levels, BoundaryZeta::uniform(square_mesh(1), 0.0), {kPi});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].error > t.rows[1].error);
  CHECK(t.rows[1].error > t.rows[2].error);
  CHECK(t.rows[2].observed_order >= 1.7);
  CHECK(t.rows[2].observed_order <= 2.3);

  // Disk polygon against the Bessel root of J_0'.
  std::vector<MeshShape> disks;
  for (auto [r, th] : {std::pair{4u, 16u}, {8u, 32u}}) {
    MeshShape s;
    s.kind = "disk";
    s.n = r;
    s.n_theta = th;
    disks.push_back(s);
  }
  const cplx ref = models::disk_mode_roots(0, 0.0, {1.0, 5.0, -1.0, 1.0}).roots.front();
  auto d = convergence_study(disks, BoundaryZeta::uniform(disk_polygon_mesh(1, 3), 0.0), {ref});
  CHECK(d.rows.back().matched);
  CHECK(d.rows.back().error < d.rows.front().error);
  CHECK(d.rows.back().error / std::abs(ref) < 0.05);

  auto far = convergence_study({levels[0]}, BoundaryZeta::uniform(square_mesh(1), 0.0), {cplx{100.0, -50.0}});
  CHECK_FALSE(far.rows[0].matched);
  CHECK_FALSE(far.notes.empty());
}
