#include "gibc/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibc/errors.hpp"

namespace gibc::ext {

using linalg::adjoint_times;

namespace {

const cplx kI{0.0, 1.0};

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.square()) throw InvalidInput(std::string(what) + " must be square");
}

// Rank with a relative cut and a floor at rounding level of the operands.
std::size_t rank_above(const std::vector<double>& s, double tol, double operand_scale) {
  if (s.empty() || s.front() == 0.0) return 0;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * operand_scale;
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double x) {
    return x > tol * s.front() && x > floor;
  }));
}

}  // namespace

std::string to_string(Source s) { return s == Source::from_k ? "from-K" : "from-Z"; }

ContractionParam cayley(const ComplexMatrix& z) {
  require_square(z, "impedance matrix");
  const auto id = ComplexMatrix::identity(z.rows());
  try {
    // (Z - I) and (Z + I)^{-1} commute.
    return ContractionParam{linalg::solve(z + id, z - id)};
  } catch (const InvalidInput&) {
    throw InvalidInput("Z + I is singular: -1 lies in the spectrum of the impedance");
  }
}

ComplexMatrix inverse_cayley(const ContractionParam& k) {
  require_square(k.k, "contraction");
  const auto id = ComplexMatrix::identity(k.k.rows());
  try {
    return linalg::solve(id - k.k, id + k.k);
  } catch (const InvalidInput&) {
    throw InvalidInput("I - K is singular: the impedance has no bounded representative");
  }
}

double cayley_identity_defect(const ComplexMatrix& z) {
  const ContractionParam k = cayley(z);
  const auto id = ComplexMatrix::identity(z.rows());
  const ComplexMatrix rhs = 2.0 * (z * linalg::inverse(z + id));
  return linalg::spectral_norm((k.k + id) - rhs);
}

ContractionParam impedance_to_contraction(const ComplexMatrix& z, const BoundaryTupleModel& tuple,
                                          const TupleTransform& t) {
  const std::size_t m = tuple.boundary_dim();
  if (z.rows() != m || z.cols() != m) throw InvalidInput("impedance matrix has the wrong size");
  return cayley(t.v_natural * z * t.v);
}

ComplexMatrix k_constraint(const ComplexMatrix& k, const ComplexMatrix& gamma0v,
                           const ComplexMatrix& gamma1v) {
  const auto id = ComplexMatrix::identity(k.rows());
  return (k + id) * gamma0v + kI * ((k - id) * gamma1v);
}

namespace {

struct Prepared {
  ComplexMatrix gamma0v, gamma1v, test_basis;
};

Prepared prepare(const OperatorModel& model, const BoundaryTupleModel& tuple,
                 const TupleTransform& t) {
  model.validate();
  tuple.validate(model.dim());
  const auto tri = tuple::to_boundary_triple(tuple, t).triple;
  Prepared p{tri.gamma0, tri.gamma1, {}};
  p.test_basis = linalg::gram_orthonormalize(linalg::nullspace(p.gamma1v), model.gram_x);
  return p;
}

ExtensionModel finish(const OperatorModel& model, Prepared p, ComplexMatrix constraint,
                      Source source) {
  const ComplexMatrix ns = linalg::nullspace(constraint, linalg::kNullTol);
  if (ns.cols() == 0) throw InvalidInput("boundary condition leaves no admissible states");
  ExtensionModel e;
  e.basis = linalg::gram_orthonormalize(ns, model.gram_x);
  const ComplexMatrix aq = model.astar * e.basis;
  const ComplexMatrix gaq = model.gram_x.matrix() * aq;
  e.op = adjoint_times(e.basis, gaq);
  const ComplexMatrix outside = aq - e.basis * e.op;
  const double scale = linalg::spectral_norm(model.gram_x.factor_apply(aq));
  e.invariance_defect =
      scale > 0.0 ? linalg::spectral_norm(model.gram_x.factor_apply(outside)) / scale : 0.0;
  e.source = source;
  e.gram = model.gram_x;
  e.astar = model.astar;
  e.gamma0v = std::move(p.gamma0v);
  e.gamma1v = std::move(p.gamma1v);
  e.test_basis = std::move(p.test_basis);
  e.constraint = std::move(constraint);
  return e;
}

}  // namespace

ExtensionModel restrict_extension(const OperatorModel& model, const BoundaryTupleModel& tuple,
                                  const TupleTransform& t, const ContractionParam& k) {
  Prepared p = prepare(model, tuple, t);
  if (k.k.rows() != tuple.boundary_dim() || k.k.cols() != tuple.boundary_dim())
    throw InvalidInput("contraction has the wrong size");
  ComplexMatrix c = k_constraint(k.k, p.gamma0v, p.gamma1v);
  return finish(model, std::move(p), std::move(c), Source::from_k);
}

ExtensionModel restrict_extension(const OperatorModel& model, const BoundaryTupleModel& tuple,
                                  const TupleTransform& t, const ImpedanceMatrix& z) {
  Prepared p = prepare(model, tuple, t);
  if (z.z.rows() != tuple.boundary_dim() || z.z.cols() != tuple.boundary_dim())
    throw InvalidInput("impedance matrix has the wrong size");
  ComplexMatrix c = z.z * tuple.gamma0 - kI * tuple.gamma1;
  ExtensionModel e = finish(model, std::move(p), std::move(c), Source::from_z);
  const ComplexMatrix zv = t.v_natural * z.z * t.v;
  if (linalg::rcond(zv + ComplexMatrix::identity(zv.rows())) < 1e-14)
    e.note = "-1 is an eigenvalue of Z_V; no contraction form exists, Z-form constraint used";
  return e;
}

bool MdissReport::resolvent_bounds_hold(double tol) const {
  return std::all_of(resolvent_checks.begin(), resolvent_checks.end(),
                     [&](const ResolventCheck& c) { return c.bound <= 1.0 + tol; });
}

const std::vector<cplx>& default_resolvent_points() {
  static const std::vector<cplx> pts{{0.0, 1.0}, {0.0, 2.0}, {1.0, 1.0}, {-1.0, 3.0}};
  return pts;
}

MdissReport mdissipativity_report(const ExtensionModel& ext, const std::vector<cplx>& points,
                                  double tol) {
  const ComplexMatrix& t = ext.op;
  require_square(t, "extension operator");
  MdissReport r;
  const std::size_t n = t.rows();
  if (n == 0) return r;
  // The basis is G-orthonormal, so the compressed operator acts in a
  // Euclidean coordinate system and the plain anti-Hermitian part applies.
  r.max_im_numrange = linalg::hermitian_eig(t.antihermitian_part(), false).values.back();
  for (const cplx z : points) {
    const auto s = linalg::singular_values(t - z * ComplexMatrix::identity(n));
    const double smin = s.back();
    if (smin <= 1e-14 * std::max(1.0, s.front())) {
      if (r.max_im_numrange <= tol)
        throw InvariantViolation("T - z is singular at a point of the upper half-plane although "
                                 "T is dissipative");
      r.resolvent_checks.push_back({z, std::numeric_limits<double>::infinity()});
      continue;
    }
    r.resolvent_checks.push_back({z, z.imag() / smin});
  }
  r.eigs = linalg::eig(t, false).values;
  return r;
}

RankReport resolvent_difference_rank(const ExtensionModel& e1, const ExtensionModel& e2, cplx z,
                                     const ContractionParam& k1, const ContractionParam& k2,
                                     double tol) {
  const std::size_t n = e1.astar.rows();
  if (e2.astar.rows() != n || e1.test_basis.cols() != e2.test_basis.cols() ||
      (e1.astar - e2.astar).max_abs() != 0.0)
    throw InvalidInput("extensions belong to different models");
  const ComplexMatrix& y = e1.test_basis;
  const ComplexMatrix ygt = adjoint_times(y, e1.gram.matrix());  // Y* G
  const ComplexMatrix shifted = e1.astar - z * ComplexMatrix::identity(n);
  const std::size_t m = k1.k.rows();
  const ComplexMatrix rhs = linalg::vstack(ygt, ComplexMatrix(m, n));

  auto resolvent = [&](const ExtensionModel& e, const ContractionParam& k) {
    const ComplexMatrix c = k_constraint(k.k, e.gamma0v, e.gamma1v);
    const ComplexMatrix kernel =
        linalg::gram_orthonormalize(linalg::nullspace(c, linalg::kNullTol), e.gram);
    if (linalg::max_principal_angle(kernel, e.basis, e.gram) > 1e-6)
      throw InvalidInput("extension does not match the supplied contraction");
    const ComplexMatrix mat = linalg::vstack(ygt * shifted, c);
    try {
      return linalg::solve(mat, rhs);
    } catch (const InvalidInput&) {
      throw InvalidInput("z lies in the spectrum of an extension");
    }
  };

  const ComplexMatrix r1 = resolvent(e1, k1);
  const ComplexMatrix r2 = resolvent(e2, k2);
  const ComplexMatrix kd = k2.k - k1.k;
  RankReport rep;
  rep.resolvent_profile = linalg::singular_values(r2 - r1);
  rep.k_profile = kd.empty() ? std::vector<double>{} : linalg::singular_values(kd);
  const double rscale = std::max(linalg::spectral_norm(r1), linalg::spectral_norm(r2));
  const double kscale = std::max({1.0, linalg::spectral_norm(k1.k), linalg::spectral_norm(k2.k)});
  rep.rank_resolvent_diff = rank_above(rep.resolvent_profile, tol, rscale);
  rep.rank_k_diff = rank_above(rep.k_profile, tol, kscale);
  rep.violation = rep.rank_resolvent_diff > rep.rank_k_diff;
  return rep;
}

}  // namespace gibc::ext
