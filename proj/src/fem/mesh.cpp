#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "gibc/errors.hpp"
#include "gibc/fem2d.hpp"

namespace gibc::fem {

namespace {

using Edge = std::pair<std::size_t, std::size_t>;

Edge sorted(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace

double Mesh::area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Point &a = vertices[tri[0]], &b = vertices[tri[1]], &c = vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::vector<int> Mesh::labels() const {
  std::set<int> s;
  for (const auto& e : boundary) s.insert(e.label);
  return {s.begin(), s.end()};
}

void Mesh::validate() const {
  const std::size_t nv = vertices.size();
  if (nv < 3 || triangles.empty()) throw InvalidInput("mesh has no triangles");
  for (const auto& v : vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InvalidInput("mesh vertex is not finite");
  std::map<Edge, int> edge_use;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (std::size_t i : triangles[t])
      if (i >= nv) throw InvalidInput("triangle " + std::to_string(t) + " has a bad vertex index");
    if (!(area(t) > 1e-14))
      throw InvalidInput("triangle " + std::to_string(t) + " is degenerate or negatively oriented");
    for (int k = 0; k < 3; ++k) ++edge_use[sorted(triangles[t][k], triangles[t][(k + 1) % 3])];
  }
  std::set<Edge> outer;
  for (const auto& [e, n] : edge_use) {
    if (n > 2) throw InvalidInput("an edge is shared by more than two triangles");
    if (n == 1) outer.insert(e);
  }
  std::set<Edge> listed;
  std::map<std::size_t, int> degree;
  for (const auto& e : boundary) {
    if (e.a >= nv || e.b >= nv || e.a == e.b) throw InvalidInput("bad boundary edge");
    const Edge s = sorted(e.a, e.b);
    if (!outer.count(s)) throw InvalidInput("boundary edge does not lie on exactly one triangle");
    if (!listed.insert(s).second) throw InvalidInput("boundary edge listed twice");
    ++degree[e.a];
    ++degree[e.b];
  }
  if (listed.size() != outer.size()) throw InvalidInput("boundary edges do not cover the boundary");
  for (const auto& [v, d] : degree)
    if (d != 2) throw InvalidInput("boundary edges do not form closed loops");
}

Mesh rectangle_mesh(std::size_t nx, std::size_t ny, double lx, double ly) {
  if (nx < 1 || ny < 1 || !(lx > 0.0) || !(ly > 0.0)) throw InvalidInput("bad rectangle size");
  Mesh m;
  auto id = [&](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i)
      m.vertices.push_back({lx * double(i) / double(nx), ly * double(j) / double(ny)});
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  for (std::size_t i = 0; i < nx; ++i) m.boundary.push_back({id(i, 0), id(i + 1, 0), 0});
  for (std::size_t j = 0; j < ny; ++j) m.boundary.push_back({id(nx, j), id(nx, j + 1), 1});
  for (std::size_t i = nx; i > 0; --i) m.boundary.push_back({id(i, ny), id(i - 1, ny), 2});
  for (std::size_t j = ny; j > 0; --j) m.boundary.push_back({id(0, j), id(0, j - 1), 3});
  return m;
}

Mesh square_mesh(std::size_t n) { return rectangle_mesh(n, n, 1.0, 1.0); }

Mesh disk_polygon_mesh(std::size_t n_r, std::size_t n_theta) {
  if (n_r < 1 || n_theta < 3) throw InvalidInput("disk mesh needs n_r >= 1 and n_theta >= 3");
  Mesh m;
  m.vertices.push_back({0.0, 0.0});
  std::vector<std::size_t> start{0}, count{1};
  for (std::size_t k = 1; k <= n_r; ++k) {
    const std::size_t c = std::max<std::size_t>(
        3, static_cast<std::size_t>(std::lround(double(n_theta) * double(k) / double(n_r))));
    start.push_back(m.vertices.size());
    count.push_back(c);
    const double r = double(k) / double(n_r);
    for (std::size_t j = 0; j < c; ++j) {
      const double t = 2.0 * std::numbers::pi * double(j) / double(c);
      m.vertices.push_back({r * std::cos(t), r * std::sin(t)});
    }
  }
  // Centre fan.
  for (std::size_t j = 0; j < count[1]; ++j)
    m.triangles.push_back({0, start[1] + j, start[1] + (j + 1) % count[1]});
  // Zip neighbouring rings by advancing whichever side has the smaller next angle.
  for (std::size_t k = 2; k <= n_r; ++k) {
    const std::size_t ci = count[k - 1], co = count[k];
    std::size_t i = 0, o = 0;
    auto vi = [&](std::size_t j) { return start[k - 1] + j % ci; };
    auto vo = [&](std::size_t j) { return start[k] + j % co; };
    while (i < ci || o < co) {
      const double ti = double(i + 1) / double(ci), to = double(o + 1) / double(co);
      if (o < co && (i >= ci || to <= ti)) {
        m.triangles.push_back({vi(i), vo(o), vo(o + 1)});
        ++o;
      } else {
        m.triangles.push_back({vi(i), vo(o), vi(i + 1)});
        ++i;
      }
    }
  }
  const std::size_t outer = start[n_r], c = count[n_r];
  for (std::size_t j = 0; j < c; ++j) m.boundary.push_back({outer + j, outer + (j + 1) % c, 0});
  return m;
}

Mesh read_mesh(std::istream& in) {
  Mesh m;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw InvalidInput("mesh file line " + std::to_string(lineno) + ": " + what);
  };
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos && line[line.find_first_not_of(" \t")] != '#')
        return true;
    }
    return false;
  };
  if (!next() || line != "mesh2d v1") fail("expected header 'mesh2d v1'");
  if (!next()) fail("missing vertex count");
  std::size_t nv = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> nv) || nv < 3) fail("bad vertex count");
  }
  while (next()) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Point p;
      if (!(ss >> p.x >> p.y)) fail("bad vertex line");
      m.vertices.push_back(p);
    } else if (tag == "t") {
      std::array<std::size_t, 3> t{};
      if (!(ss >> t[0] >> t[1] >> t[2])) fail("bad triangle line");
      for (auto i : t)
        if (i >= nv) fail("triangle refers to vertex " + std::to_string(i));
      m.triangles.push_back(t);
    } else if (tag == "b") {
      BoundaryEdge e;
      if (!(ss >> e.a >> e.b >> e.label)) fail("bad boundary line");
      if (e.a >= nv || e.b >= nv) fail("boundary edge refers to a missing vertex");
      m.boundary.push_back(e);
    } else {
      fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (ss >> extra) fail("trailing data");
  }
  if (m.vertices.size() != nv) throw InvalidInput("mesh file: vertex count does not match header");
  m.validate();
  return m;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& m) {
  char buf[128];
  out << "mesh2d v1\n" << m.vertices.size() << "\n";
  for (const auto& v : m.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", v.x, v.y);
    out << buf;
  }
  for (const auto& t : m.triangles) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : m.boundary) out << "b " << e.a << ' ' << e.b << ' ' << e.label << '\n';
}

Mesh build_mesh(const MeshShape& s) {
  Mesh m;
  if (s.kind == "square") {
    if (s.n < 1) throw InvalidInput("square needs n >= 1");
    m = square_mesh(s.n);
  } else if (s.kind == "rectangle") {
    m = rectangle_mesh(s.nx, s.ny, s.lx, s.ly);
  } else if (s.kind == "disk") {
    m = disk_polygon_mesh(s.n, s.n_theta);
  } else if (s.kind == "file") {
    return read_mesh_file(s.path);
  } else {
    throw InvalidInput("unknown mesh shape '" + s.kind + "'");
  }
  m.validate();
  return m;
}

double max_edge_length(const Mesh& m) {
  double h = 0.0;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      const Point &a = m.vertices[t[k]], &b = m.vertices[t[(k + 1) % 3]];
      h = std::max(h, std::hypot(b.x - a.x, b.y - a.y));
    }
  return h;
}

}  // namespace gibc::fem
