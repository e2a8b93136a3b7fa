#include "gibc/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <random>

#include "gibc/errors.hpp"
#include "gibc/extensions.hpp"
#include "gibc/fixtures.hpp"
#include "gibc/io.hpp"
#include "gibc/model_problems.hpp"

namespace gibc::cli {

namespace {

using io::json;
using linalg::ComplexMatrix;
using linalg::cplx;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Common {
  double tol = 0.0;  // 0: subcommand default
  std::string out;
  bool allow_nonaccretive = false;

  double tol_or(double fallback) const { return tol > 0.0 ? tol : fallback; }
};

// Writes the primary output. A ".json" path receives the summary only;
// any other path receives the table and the summary goes to a sidecar with
// the extension replaced by ".json".
void emit(const Common& c, const io::CsvTable* table, const json& summary) {
  if (c.out.empty()) return;
  std::filesystem::path p(c.out);
  if (p.extension() == ".json" || table == nullptr) {
    io::write_atomic(c.out, io::dump_json(summary));
    return;
  }
  io::write_atomic(c.out, table->str());
  io::write_atomic(std::filesystem::path(p).replace_extension(".json").string(), io::dump_json(summary));
}

void add_common(CLI::App* app, Common& c, bool nonaccretive_flag = false) {
  app->add_option("--tol", c.tol, "tolerance (subcommand default when omitted)")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "output file (.csv table with .json sidecar, or .json)");
  if (nonaccretive_flag)
    app->add_flag("--allow-nonaccretive", c.allow_nonaccretive,
                  "accept Re zeta < 0 (the enclosure checks are skipped)");
}

void require_accretive(double min_re, const Common& c) {
  if (min_re < 0.0 && !c.allow_nonaccretive)
    throw InvariantViolation("zeta is not accretive (min Re zeta = " + sci(min_re) +
                             "), so the enclosure Im lambda <= 0 does not hold; "
                             "pass --allow-nonaccretive to run anyway");
}

json spectrum_summary(const SpectrumReport& r) {
  json notes = r.notes;
  return {{"count", r.values.size()},
          {"max_imag", r.values.empty() ? 0.0 : r.max_imag()},
          {"critical_damping", r.critical_damping},
          {"cross_check", r.cross_check},
          {"notes", notes}};
}

void check_enclosure(const SpectrumReport& r, double tol, const Common& c) {
  if (c.allow_nonaccretive || r.values.empty()) return;
  const double top = r.max_imag();
  if (top > tol)
    throw InvariantViolation("enclosure breached: max Im lambda = " + sci(top) + " > " + sci(tol));
}

// ---------------------------------------------------------------- green-check

struct GreenOpts {
  Common c;
  std::string fixture = "transport-64";
  int trials = 100;
  std::uint64_t seed = 1;
};

int green_check(const GreenOpts& o, std::ostream& out) {
  if (o.trials < 1) throw InvalidInput("--trials must be positive");
  auto fx = fixtures::by_name(o.fixture);
  const double tol = o.c.tol_or(fx.tolerance);
  std::mt19937_64 rng(o.seed);
  io::CsvTable t{{"trial", "defect", "relative_defect"}, {}};
  double worst = 0.0, worst_rel = 0.0;
  for (int k = 0; k < o.trials; ++k) {
    auto f = fixtures::random_smooth_state(fx.nodes, rng);
    auto g = fixtures::random_smooth_state(fx.nodes, rng);
    const double d = std::abs(tuple::green_defect(fx.model, fx.tuple, f, g));
    const double rel = d / (fx.model.gram_x.norm(f) * fx.model.gram_x.norm(g));
    worst = std::max(worst, d);
    worst_rel = std::max(worst_rel, rel);
    t.add({std::to_string(k), io::format_double(d), io::format_double(rel)});
  }
  const bool pass = worst_rel <= tol;
  emit(o.c, &t,
       {{"fixture", o.fixture}, {"trials", o.trials}, {"seed", o.seed}, {"tol", tol},
        {"max_defect", worst}, {"max_relative_defect", worst_rel}, {"pass", pass}});
  out << "green-check " << o.fixture << ": max defect " << sci(worst) << " (relative "
      << sci(worst_rel) << ") over " << o.trials << " pairs\n";
  if (!pass) throw InvariantViolation("Green identity defect " + sci(worst_rel) + " exceeds " + sci(tol));
  return kExitOk;
}

// ---------------------------------------------------------------- extension

// A complex number means that multiple of the identity; anything else is a
// JSON matrix file.
ComplexMatrix parse_matrix(const std::string& spec, std::size_t dim) {
  try {
    return parse_complex(spec) * ComplexMatrix::identity(dim);
  } catch (const InvalidInput&) {
  }
  json j;
  try {
    j = json::parse(io::read_file(spec));
  } catch (const json::exception& e) {
    throw InvalidInput("matrix file " + spec + ": " + e.what());
  }
  auto m = io::matrix_from_json(j);
  if (m.rows() != dim || m.cols() != dim)
    throw InvalidInput("matrix " + spec + " must be " + std::to_string(dim) + "x" + std::to_string(dim));
  return m;
}

ComplexMatrix random_accretive(std::size_t n, double shift, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  ComplexMatrix b(n, n), s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) = {d(rng), d(rng)};
      s(i, j) = {d(rng), d(rng)};
    }
  ComplexMatrix z = linalg::adjoint_times(b, b) + cplx{0.0, 1.0} * s.hermitian_part();
  for (std::size_t i = 0; i < n; ++i) z(i, i) += shift;
  return z;
}

struct CayleyOpts {
  Common c;
  std::string z;
  std::size_t random = 0;
  int count = 1;
  double shift = 0.0;
  std::uint64_t seed = 1;
};

int extension_cayley(const CayleyOpts& o, std::ostream& out) {
  const double tol = o.c.tol_or(1e-10);
  std::vector<ComplexMatrix> zs;
  if (!o.z.empty()) {
    json j;
    try {
      zs.push_back(parse_complex(o.z) * ComplexMatrix::identity(1));
    } catch (const InvalidInput&) {
      try {
        j = json::parse(io::read_file(o.z));
      } catch (const json::exception& e) {
        throw InvalidInput("matrix file " + o.z + ": " + e.what());
      }
      zs.push_back(io::matrix_from_json(j));
    }
  } else {
    if (o.random == 0) throw InvalidInput("give --z or --random <max size>");
    std::mt19937_64 rng(o.seed);
    for (int k = 0; k < o.count; ++k)
      zs.push_back(random_accretive(1 + static_cast<std::size_t>(k) % o.random, o.shift, rng));
  }
  io::CsvTable t{{"index", "size", "accretivity_defect", "contraction_norm", "roundtrip_error",
                  "identity_defect"},
                 {}};
  double worst_rt = 0.0, worst_id = 0.0;
  std::size_t breaches = 0;
  json last;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    const auto& z = zs[k];
    if (!z.square()) throw InvalidInput("impedance matrix must be square");
    const std::size_t n = z.rows();
    const auto trivial = tuple::trivial_tuple(ComplexMatrix(n, 1), ComplexMatrix(n, 1));
    const double defect = tuple::accretivity_defect(z, trivial);
    const auto kk = ext::cayley(z);
    const double norm = kk.norm(linalg::GramMatrix::identity(n));
    double rt = 0.0;
    try {
      rt = (ext::inverse_cayley(kk) - z).max_abs();
    } catch (const InvalidInput&) {
      rt = std::numeric_limits<double>::infinity();
    }
    const double id = ext::cayley_identity_defect(z);
    worst_rt = std::max(worst_rt, rt);
    worst_id = std::max(worst_id, id);
    // A contraction exactly when accretive.
    if ((defect >= -tol) != (norm <= 1.0 + tol)) ++breaches;
    t.add({std::to_string(k), std::to_string(n), io::format_double(defect), io::format_double(norm),
           io::format_double(rt), io::format_double(id)});
    last = {{"k", io::matrix_json(kk.k)}, {"accretivity_defect", defect}, {"contraction_norm", norm}};
  }
  json summary{{"matrices", zs.size()}, {"tol", tol}, {"max_roundtrip_error", worst_rt},
               {"max_identity_defect", worst_id}, {"correspondence_breaches", breaches}};
  if (zs.size() == 1) summary.update(last);
  emit(o.c, &t, summary);
  out << "extension cayley: " << zs.size() << " matrices, max round trip " << sci(worst_rt)
      << ", max identity defect " << sci(worst_id) << ", breaches " << breaches << "\n";
  if (breaches) throw InvariantViolation("contraction norm disagrees with accretivity");
  return kExitOk;
}

struct ExtOpts {
  Common c;
  std::string fixture = "transport-64";
  std::string k, z;
  std::string k1, k2;
  std::string at = "0,1";
};

int extension_mdiss(const ExtOpts& o, std::ostream& out) {
  const double tol = o.c.tol_or(1e-10);
  if (o.k.empty() == o.z.empty()) throw InvalidInput("give exactly one of --k and --z");
  auto fx = fixtures::by_name(o.fixture);
  const auto t = tuple::TupleTransform::identity(fx.tuple);
  const std::size_t m = fx.tuple.boundary_dim();
  ext::ContractionParam k;
  ext::ExtensionModel e;
  if (!o.k.empty()) {
    k.k = parse_matrix(o.k, m);
    e = ext::restrict_extension(fx.model, fx.tuple, t, k);
  } else {
    const ComplexMatrix z = parse_matrix(o.z, m);
    e = ext::restrict_extension(fx.model, fx.tuple, t, ext::ImpedanceMatrix{z});
    k = ext::impedance_to_contraction(z, fx.tuple, t);
  }
  const double knorm = k.norm(fx.tuple.gram_pivot);
  const auto r = ext::mdissipativity_report(e, ext::default_resolvent_points(), tol);
  io::CsvTable tab{{"re_lambda", "im_lambda"}, {}};
  auto eigs = r.eigs;
  std::sort(eigs.begin(), eigs.end(), [](cplx a, cplx b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a.real() < b.real();
  });
  for (cplx l : eigs) tab.add({io::format_double(l.real()), io::format_double(l.imag())});
  json checks = json::array();
  for (const auto& ch : r.resolvent_checks) checks.push_back({{"z", io::complex_json(ch.z)}, {"bound", ch.bound}});
  const bool contraction = knorm <= 1.0 + ext::kContractionSlack;
  const bool diss = r.dissipative(tol) && r.resolvent_bounds_hold(tol);
  emit(o.c, &tab,
       {{"fixture", o.fixture}, {"contraction_norm", knorm}, {"max_im_numrange", r.max_im_numrange},
        {"resolvent_checks", checks}, {"dissipative", diss}, {"tol", tol}, {"note", e.note}});
  out << "extension mdiss " << o.fixture << ": ||K|| = " << sci(knorm) << ", max Im numerical range "
      << sci(r.max_im_numrange) << (diss ? ", dissipative\n" : ", not dissipative\n");
  if (contraction && !diss)
    throw InvariantViolation("contraction K gives an extension that is not m-dissipative");
  return kExitOk;
}

int extension_rank(const ExtOpts& o, std::ostream& out) {
  const double tol = o.c.tol_or(linalg::kRankTol);
  if (o.k1.empty() || o.k2.empty()) throw InvalidInput("--k1 and --k2 are required");
  auto fx = fixtures::by_name(o.fixture);
  const auto t = tuple::TupleTransform::identity(fx.tuple);
  const std::size_t m = fx.tuple.boundary_dim();
  const ext::ContractionParam k1{parse_matrix(o.k1, m)}, k2{parse_matrix(o.k2, m)};
  const cplx z = parse_complex(o.at);
  auto e1 = ext::restrict_extension(fx.model, fx.tuple, t, k1);
  auto e2 = ext::restrict_extension(fx.model, fx.tuple, t, k2);
  const auto r = ext::resolvent_difference_rank(e1, e2, z, k1, k2, tol);
  io::CsvTable tab{{"index", "sigma_resolvent_diff", "sigma_k_diff"}, {}};
  for (std::size_t i = 0; i < r.resolvent_profile.size(); ++i)
    tab.add({std::to_string(i + 1), io::format_double(r.resolvent_profile[i]),
             i < r.k_profile.size() ? io::format_double(r.k_profile[i]) : ""});
  emit(o.c, &tab,
       {{"fixture", o.fixture}, {"z", io::complex_json(z)}, {"rank_resolvent_diff", r.rank_resolvent_diff},
        {"rank_k_diff", r.rank_k_diff}, {"violation", r.violation}, {"tol", tol}});
  out << "extension rank " << o.fixture << ": rank(R2-R1) = " << r.rank_resolvent_diff
      << ", rank(K2-K1) = " << r.rank_k_diff << "\n";
  if (r.violation) throw InvariantViolation("rank(R2 - R1) exceeds rank(K2 - K1)");
  return kExitOk;
}

// ---------------------------------------------------------------- gate / lq

struct GateOpts {
  Common c;
  std::string zeta, op;
  double s = 0.5;
  std::string sections;
};

int gate(const GateOpts& o, std::ostream& out) {
  const auto schedule = o.sections.empty() ? sobolev::default_schedule() : parse_schedule(o.sections);
  sobolev::GateThresholds th;
  th.theta_c = o.c.tol_or(th.theta_c);
  if (o.zeta.empty() == o.op.empty()) throw InvalidInput("give exactly one of --zeta and --operator");
  if (!(o.s > 0.0)) throw InvalidInput("--s must be positive");
  sobolev::CompactnessReport r;
  if (!o.op.empty()) {
    if (o.op != "ilambda") throw InvalidInput("unknown operator '" + o.op + "' (known: ilambda)");
    r = sobolev::compactness_gate(sobolev::i_lambda(o.s), o.s, schedule, th);
  } else {
    r = sobolev::compactness_gate(parse_circle_zeta(o.zeta), o.s, schedule, th);
  }
  const auto tab = io::gate_csv(r);
  emit(o.c, &tab, io::gate_json(r));
  out << "gate: verdict " << sobolev::to_string(r.verdict) << " (" << r.rule << "), final tail "
      << sci(r.tail_indicator.back()) << "\n";
  return kExitOk;
}

struct LqOpts {
  Common c;
  std::string zeta;
  double q = 2.0, s = 0.5;
  std::string sections;
};

int lq(const LqOpts& o, std::ostream& out) {
  const auto schedule = o.sections.empty() ? sobolev::default_schedule() : parse_schedule(o.sections);
  const auto zeta = parse_circle_zeta(o.zeta);
  const auto r = sobolev::lq_report(zeta, o.q, o.s, schedule);
  const double tol = o.c.tol_or(1e-12);
  const double min_re = zeta.min_real_part();
  json summary{{"q", r.q}, {"s", o.s}, {"lq_norm", r.lq_norm}, {"finite", r.finite},
               {"accretive", min_re >= -tol}, {"min_real_part", min_re},
               {"theorem_applies", r.theorem_applies}, {"holder_ratio", r.holder_ratio}};
  emit(o.c, nullptr, summary);
  out << "lq: ||zeta||_" << o.q << " = " << sci(r.lq_norm)
      << (r.theorem_applies ? ", compactness theorem applies\n" : ", compactness theorem does not apply\n");
  return kExitOk;
}

// ---------------------------------------------------------------- models

struct StringOpts {
  Common c;
  std::string zeta = "0.5";
  std::size_t modes = 10;
  bool mirrored = false;
};

int string_cmd(const StringOpts& o, std::ostream& out) {
  const cplx zeta = parse_complex(o.zeta);
  require_accretive(zeta.real(), o.c);
  models::StringSpec spec{zeta, o.modes, o.mirrored, o.c.allow_nonaccretive};
  const auto r = models::string_spectrum(spec);
  const double tol = o.c.tol_or(1e-8);
  const auto tab = io::spectrum_csv(r);
  emit(o.c, &tab, spectrum_summary(r));
  out << "string: " << r.values.size() << " modes, max Im " << sci(r.values.empty() ? 0.0 : r.max_imag())
      << ", Newton cross-check " << sci(r.cross_check) << (r.critical_damping ? ", critical damping" : "")
      << "\n";
  check_enclosure(r, tol, o.c);
  if (r.cross_check > std::max(tol, 1e-8))
    throw NumericalFailure("Newton roots disagree with the closed form by " + sci(r.cross_check));
  return kExitOk;
}

struct DiskOpts {
  Common c;
  std::string zeta = "0";
  int m_max = 8;
  std::string box;
};

int disk_cmd(const DiskOpts& o, std::ostream& out) {
  const cplx zeta = parse_complex(o.zeta);
  require_accretive(zeta.real(), o.c);
  models::DiskSpec spec;
  spec.zeta = zeta;
  spec.m_max = o.m_max;
  spec.allow_nonaccretive = o.c.allow_nonaccretive;
  if (!o.box.empty()) {
    std::vector<double> b;
    std::string rest = o.box;
    for (std::size_t pos; (pos = rest.find(',')) != std::string::npos; rest = rest.substr(pos + 1))
      b.push_back(parse_complex(rest.substr(0, pos)).real());
    b.push_back(parse_complex(rest).real());
    if (b.size() != 4) throw InvalidInput("--box expects re_min,re_max,im_min,im_max");
    spec.box = {b[0], b[1], b[2], b[3]};
  }
  const auto r = models::disk_spectrum(spec);
  auto summary = spectrum_summary(r);
  json counts = json::array();
  for (const auto& m : r.modes) counts.push_back({{"contour_count", m.contour_count}, {"roots", m.roots.size()}});
  summary["modes"] = counts;
  summary["counts_match"] = r.counts_match;
  summary["min_gap"] = r.min_gap;
  const auto tab = io::spectrum_csv(r);
  emit(o.c, &tab, summary);
  out << "disk: " << r.values.size() << " eigenvalues for m <= " << o.m_max << ", max Im "
      << sci(r.values.empty() ? 0.0 : r.max_imag()) << (r.counts_match ? ", counts match\n" : ", COUNT MISMATCH\n");
  check_enclosure(r, o.c.tol_or(1e-8), o.c);
  if (!r.counts_match) throw NumericalFailure("argument-principle counts disagree with the polished roots");
  return kExitOk;
}

// ---------------------------------------------------------------- fem

struct MeshOpts {
  std::string shape = "square";
  std::size_t n = 8, nx = 8, ny = 8, n_theta = 32;
  double lx = 1.0, ly = 1.0;
  std::string mesh;
  std::string zeta = "0";
  std::vector<std::string> edges;
};

void add_mesh_options(CLI::App* app, MeshOpts& m) {
  app->add_option("--shape", m.shape, "square | rectangle | disk | file")
      ->check(CLI::IsMember({"square", "rectangle", "disk", "file"}));
  app->add_option("--n", m.n, "cells per side (square) or rings (disk)");
  app->add_option("--nx", m.nx);
  app->add_option("--ny", m.ny);
  app->add_option("--lx", m.lx);
  app->add_option("--ly", m.ly);
  app->add_option("--ntheta", m.n_theta, "boundary vertices of the disk polygon");
  app->add_option("--mesh", m.mesh, "mesh file (implies --shape file)");
  app->add_option("--zeta", m.zeta, "number | re,im | const:re,im | file:path");
  app->add_option("--edge", m.edges, "per-label override label=re[,im]")->take_all();
}

fem::MeshShape shape_of(const MeshOpts& m) {
  fem::MeshShape s;
  s.kind = m.mesh.empty() ? m.shape : "file";
  s.n = m.n;
  s.nx = m.nx;
  s.ny = m.ny;
  s.lx = m.lx;
  s.ly = m.ly;
  s.n_theta = m.n_theta;
  s.path = m.mesh;
  return s;
}

struct FemOpts {
  Common c;
  MeshOpts mesh;
  std::size_t nev = 10;
  std::string route = "energy";
};

int fem_cmd(const FemOpts& o, std::ostream& out) {
  const auto mesh = fem::build_mesh(shape_of(o.mesh));
  const auto zeta = parse_mesh_zeta(o.mesh.zeta, mesh, o.mesh.edges);
  require_accretive(zeta.min_real(mesh), o.c);
  const auto q = fem::assemble(mesh, {}, zeta);
  const auto r = fem::solve_qep(q, o.nev, o.route == "companion" ? fem::QepRoute::companion : fem::QepRoute::energy);
  const double tol = o.c.tol_or(1e-8);
  auto summary = spectrum_summary(r);
  summary["route"] = r.route;
  summary["dofs"] = mesh.num_vertices();
  summary["kernel_dim"] = r.kernel_dim;
  double worst_res = 0.0;
  for (const auto& e : r.values)
    if (!e.artifact) worst_res = std::max(worst_res, e.residual);
  summary["max_residual"] = worst_res;
  const auto tab = io::spectrum_csv(r);
  emit(o.c, &tab, summary);
  out << "fem: " << mesh.num_vertices() << " dofs, " << r.values.size() << " eigenvalues (" << r.route
      << "), max Im " << sci(r.values.empty() ? 0.0 : r.max_imag()) << ", max residual " << sci(worst_res)
      << "\n";
  check_enclosure(r, tol, o.c);
  return kExitOk;
}

struct MarchOpts {
  Common c;
  MeshOpts mesh;
  double dt = 1e-3;
  std::size_t steps = 2000;
  std::uint64_t seed = 1;
};

int march_cmd(const MarchOpts& o, std::ostream& out) {
  const auto mesh = fem::build_mesh(shape_of(o.mesh));
  const auto zeta = parse_mesh_zeta(o.mesh.zeta, mesh, o.mesh.edges);
  require_accretive(zeta.min_real(mesh), o.c);
  const auto q = fem::assemble(mesh, {}, zeta);
  const auto tr = fem::cn_energy_march(q, fem::random_state(q, o.seed), o.dt, o.steps);
  const double tol = o.c.tol_or(1e-12);
  const double drift = tr.energy.back() / tr.energy.front() - 1.0;
  const auto tab = io::energy_csv(tr);
  emit(o.c, &tab,
       {{"dofs", mesh.num_vertices()}, {"dt", o.dt}, {"steps", o.steps}, {"seed", o.seed},
        {"initial_energy", tr.energy.front()}, {"final_energy", tr.energy.back()},
        {"relative_change", drift}, {"max_relative_increase", tr.max_relative_increase}, {"tol", tol}});
  out << "march: " << o.steps << " steps, E_N/E_0 - 1 = " << sci(drift) << ", max step increase "
      << sci(tr.max_relative_increase) << "\n";
  if (!o.c.allow_nonaccretive && tr.max_relative_increase > tol)
    throw InvariantViolation("energy increased by " + sci(tr.max_relative_increase) + " in one step");
  return kExitOk;
}

struct ConvergeOpts {
  Common c;
  MeshOpts mesh;
  std::string levels;
  std::vector<std::string> reference;
};

int converge_cmd(const ConvergeOpts& o, std::ostream& out) {
  std::vector<fem::MeshShape> levels;
  const bool disk = o.mesh.shape == "disk";
  if (o.mesh.shape != "square" && !disk) throw InvalidInput("converge supports --shape square or disk");
  std::string rest = o.levels.empty() ? (disk ? "4:16,8:32,16:64" : "8,16,32") : o.levels;
  for (const auto& item : [&] {
         std::vector<std::string> v;
         for (std::size_t pos; (pos = rest.find(',')) != std::string::npos; rest = rest.substr(pos + 1))
           v.push_back(rest.substr(0, pos));
         v.push_back(rest);
         return v;
       }()) {
    fem::MeshShape s;
    s.kind = o.mesh.shape;
    const auto colon = item.find(':');
    if (disk) {
      if (colon == std::string::npos) throw InvalidInput("disk levels are rings:boundary_vertices");
      s.n = static_cast<std::size_t>(parse_schedule(item.substr(0, colon)).front());
      s.n_theta = static_cast<std::size_t>(parse_schedule(item.substr(colon + 1)).front());
    } else {
      s.n = parse_schedule(item).front();
    }
    levels.push_back(s);
  }
  const auto coarse = fem::build_mesh(levels.front());
  const auto zeta = parse_mesh_zeta(o.mesh.zeta, coarse, o.mesh.edges);
  require_accretive(zeta.min_real(coarse), o.c);
  std::vector<cplx> refs;
  for (const auto& r : o.reference) refs.push_back(parse_complex(r));
  if (refs.empty()) {
    // Oracles: pi for the Neumann square, the first m = 0 Bessel root for the disk.
    if (disk) {
      if (!zeta.sampled.empty() || zeta.constant.size() != 1)
        throw InvalidInput("the disk oracle needs a constant zeta; pass --reference");
      const cplx z = zeta.constant.begin()->second;
      auto roots = models::disk_mode_roots(0, z, {1.0, 6.0, -5.0, 0.5}).roots;
      if (roots.empty()) throw NumericalFailure("no Bessel reference root in [1, 6]");
      refs.push_back(*std::min_element(roots.begin(), roots.end(),
                                       [](cplx a, cplx b) { return std::abs(a) < std::abs(b); }));
    } else {
      if (!zeta.identically_zero()) throw InvalidInput("the square oracle is Neumann only; pass --reference");
      refs.push_back(std::numbers::pi);
    }
  }
  const auto t = fem::convergence_study(levels, zeta, refs);
  const double tol = o.c.tol_or(1e-8);
  json rows = json::array();
  double top = -1e300;
  for (const auto& r : t.rows) {
    top = std::max(top, r.computed.imag());
    rows.push_back({{"h", r.h}, {"dofs", r.dofs}, {"error", r.error},
                    {"relative_error", r.error / std::abs(r.reference)}, {"observed_order", r.observed_order},
                    {"matched", r.matched}});
  }
  json notes = t.notes;
  const auto tab = io::convergence_csv(t);
  emit(o.c, &tab, {{"levels", rows}, {"notes", notes}});
  const auto& last = t.rows.back();
  out << "converge: finest h " << sci(last.h) << ", relative error " << sci(last.error / std::abs(last.reference))
      << ", observed order " << sci(last.observed_order) << "\n";
  if (!o.c.allow_nonaccretive && top > tol)
    throw InvariantViolation("enclosure breached: computed Im lambda = " + sci(top));
  return kExitOk;
}

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Impedance boundary condition workbench", "gibc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  GreenOpts green;
  auto* g = app.add_subcommand("green-check", "Green identity defect on random smooth pairs");
  add_common(g, green.c);
  g->add_option("--fixture", green.fixture, "transport-<n> | sturm-<n> | rigged-sturm-<n>");
  g->add_option("--trials", green.trials);
  g->add_option("--seed", green.seed);

  auto* ex = app.add_subcommand("extension", "Cayley transforms and restrictions of A*");
  ex->require_subcommand(1);
  CayleyOpts cay;
  auto* ca = ex->add_subcommand("cayley", "Cayley transform of an impedance matrix");
  add_common(ca, cay.c);
  ca->add_option("--z", cay.z, "complex number or JSON matrix file");
  ca->add_option("--random", cay.random, "random accretive matrices of size 1..N");
  ca->add_option("--count", cay.count)->check(CLI::PositiveNumber);
  ca->add_option("--shift", cay.shift, "added to the diagonal of random matrices");
  ca->add_option("--seed", cay.seed);
  ExtOpts md, rk;
  auto* mdc = ex->add_subcommand("mdiss", "m-dissipativity of a restriction");
  add_common(mdc, md.c);
  mdc->add_option("--fixture", md.fixture);
  mdc->add_option("--k", md.k, "contraction: number (times I) or JSON matrix file");
  mdc->add_option("--z", md.z, "impedance: number (times I) or JSON matrix file");
  auto* rkc = ex->add_subcommand("rank", "rank of a resolvent difference");
  add_common(rkc, rk.c);
  rkc->add_option("--fixture", rk.fixture);
  rkc->add_option("--k1", rk.k1)->required();
  rkc->add_option("--k2", rk.k2)->required();
  rkc->add_option("--at", rk.at, "spectral point re,im (default 0,1)");

  GateOpts gt;
  auto* ga = app.add_subcommand("gate", "compactness of the multiplier H^s -> H^-s");
  add_common(ga, gt.c);
  ga->add_option("--zeta", gt.zeta, "number | re,im | const:re,im | power:a=..,c=.. | file:path");
  ga->add_option("--operator", gt.op, "explicit operator instead of a coefficient (ilambda)");
  ga->add_option("--s", gt.s);
  ga->add_option("--sections", gt.sections, "e.g. 16,32,64,128");

  LqOpts lo;
  auto* lqc = app.add_subcommand("lq", "L^q norm and the integrability criterion");
  add_common(lqc, lo.c);
  lqc->add_option("--zeta", lo.zeta)->required();
  lqc->add_option("--q", lo.q);
  lqc->add_option("--s", lo.s);
  lqc->add_option("--sections", lo.sections);

  StringOpts so;
  auto* st = app.add_subcommand("string", "damped string eigenvalues");
  add_common(st, so.c, true);
  st->add_option("--zeta", so.zeta);
  st->add_option("--modes", so.modes);
  st->add_flag("--mirrored", so.mirrored, "also report the mirrored branch");

  DiskOpts dop;
  auto* dk = app.add_subcommand("disk", "unit disk eigenvalues by the argument principle");
  add_common(dk, dop.c, true);
  dk->add_option("--zeta", dop.zeta);
  dk->add_option("--m-max", dop.m_max);
  dk->add_option("--box", dop.box, "re_min,re_max,im_min,im_max");

  FemOpts fo;
  auto* fe = app.add_subcommand("fem", "P1 finite element quadratic eigenproblem");
  add_common(fe, fo.c, true);
  add_mesh_options(fe, fo.mesh);
  fe->add_option("--nev", fo.nev, "eigenvalues of smallest modulus (0: all)");
  fe->add_option("--route", fo.route, "energy | companion")->check(CLI::IsMember({"energy", "companion"}));

  MarchOpts mo;
  auto* ma = app.add_subcommand("march", "Crank-Nicolson energy trace");
  add_common(ma, mo.c, true);
  add_mesh_options(ma, mo.mesh);
  ma->add_option("--dt", mo.dt)->check(CLI::PositiveNumber);
  ma->add_option("--steps", mo.steps);
  ma->add_option("--seed", mo.seed);

  ConvergeOpts co;
  auto* cv = app.add_subcommand("converge", "mesh convergence against an oracle eigenvalue");
  add_common(cv, co.c, true);
  add_mesh_options(cv, co.mesh);
  cv->add_option("--levels", co.levels, "square: 8,16,32; disk: 4:16,8:32");
  cv->add_option("--reference", co.reference, "reference eigenvalue(s) re[,im]")->take_all();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  linalg::configure_threads();
  if (g->parsed()) return green_check(green, out);
  if (ca->parsed()) return extension_cayley(cay, out);
  if (mdc->parsed()) return extension_mdiss(md, out);
  if (rkc->parsed()) return extension_rank(rk, out);
  if (ga->parsed()) return gate(gt, out);
  if (lqc->parsed()) return lq(lo, out);
  if (st->parsed()) return string_cmd(so, out);
  if (dk->parsed()) return disk_cmd(dop, out);
  if (fe->parsed()) return fem_cmd(fo, out);
  if (ma->parsed()) return march_cmd(mo, out);
  if (cv->parsed()) return converge_cmd(co, out);
  err << app.help();
  return kExitInvalid;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(args, out, err);
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const IoFailure& e) {
    err << "i/o failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace gibc::cli
