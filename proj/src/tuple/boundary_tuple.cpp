#include "gibc/boundary_tuple.hpp"

#include <algorithm>
#include <cmath>

#include "gibc/errors.hpp"

namespace gibc::tuple {

using linalg::adjoint_times;
using linalg::dot;

void OperatorModel::validate() const {
  if (!astar.square()) throw InvalidInput("operator matrix must be square");
  if (astar.rows() != gram_x.dim())
    throw InvalidInput("operator matrix and state Gram differ in size");
}

void BoundaryTupleModel::validate(std::size_t model_dim) const {
  if (gamma0.cols() != model_dim || gamma1.cols() != model_dim)
    throw InvalidInput("trace maps must act on the model space");
  const std::size_t m = gamma0.rows();
  if (gamma1.rows() != m || gram_minus.dim() != m || gram_pivot.dim() != m ||
      gram_plus.dim() != m || pairing.rows() != m || pairing.cols() != m)
    throw InvalidInput("boundary spaces differ in dimension");
  if (m > 0 && linalg::rcond(pairing) < 1e-14) throw InvalidInput("duality pairing is degenerate");
}

bool BoundaryTupleModel::trivial_duality(double tol) const {
  const auto id = ComplexMatrix::identity(boundary_dim());
  return (gram_minus.matrix() - id).max_abs() <= tol && (gram_pivot.matrix() - id).max_abs() <= tol &&
         (gram_plus.matrix() - id).max_abs() <= tol && (pairing - id).max_abs() <= tol;
}

BoundaryTupleModel trivial_tuple(ComplexMatrix gamma0, ComplexMatrix gamma1) {
  const std::size_t m = gamma0.rows();
  return BoundaryTupleModel{std::move(gamma0),        std::move(gamma1),
                            GramMatrix::identity(m),  GramMatrix::identity(m),
                            GramMatrix::identity(m),  ComplexMatrix::identity(m)};
}

TupleTransform TupleTransform::from_v(const ComplexMatrix& v, const BoundaryTupleModel& tuple) {
  const std::size_t m = tuple.boundary_dim();
  if (v.rows() != m || v.cols() != m) throw InvalidInput("transform V has the wrong size");
  if (m > 0 && linalg::rcond(v) < 1e-14) throw InvalidInput("transform V is singular");
  ComplexMatrix vn = linalg::solve(tuple.gram_pivot.matrix(), adjoint_times(v, tuple.pairing));
  return TupleTransform{v, std::move(vn)};
}

TupleTransform TupleTransform::identity(const BoundaryTupleModel& tuple) {
  return from_v(ComplexMatrix::identity(tuple.boundary_dim()), tuple);
}

double TupleTransform::pairing_defect(const BoundaryTupleModel& tuple) const {
  // <V e_i, e_j> = e_j* P* V e_i  and  (e_i | Vn e_j)_H = (Vn e_j)* G e_i.
  const ComplexMatrix lhs = adjoint_times(tuple.pairing, v);
  const ComplexMatrix rhs = adjoint_times(v_natural, tuple.gram_pivot.matrix());
  return (lhs - rhs).max_abs();
}

cplx boundary_form(const BoundaryTupleModel& tuple, std::span<const cplx> f,
                   std::span<const cplx> g) {
  const Vector g0f = tuple.gamma0 * f, g1f = tuple.gamma1 * f;
  const Vector g0g = tuple.gamma0 * g, g1g = tuple.gamma1 * g;
  // <Gamma1 f, Gamma0 g> = (Gamma0 g)* P (Gamma1 f)
  const cplx a = dot(g0g, tuple.pairing * g1f);
  // <Gamma0 f, Gamma1 g> = (Gamma1 g)* P* (Gamma0 f) = conj((Gamma0 f)* P (Gamma1 g))
  const cplx b = std::conj(dot(g0f, tuple.pairing * g1g));
  return a - b;
}

cplx green_defect(const OperatorModel& model, const BoundaryTupleModel& tuple,
                  std::span<const cplx> f, std::span<const cplx> g) {
  if (f.size() != model.dim() || g.size() != model.dim())
    throw InvalidInput("state vectors do not match the model dimension");
  tuple.validate(model.dim());
  const Vector af = model.astar * f, ag = model.astar * g;
  const cplx lhs = model.gram_x.inner(af, g) - model.gram_x.inner(f, ag);
  return lhs - boundary_form(tuple, f, g);
}

BoundaryTupleModel dual_triple(const BoundaryTupleModel& triple) {
  BoundaryTupleModel d = triple;
  d.gamma0 = cplx{0.0, 1.0} * triple.gamma1;
  d.gamma1 = cplx{0.0, -1.0} * triple.gamma0;
  return d;
}

TriplePair to_boundary_triple(const BoundaryTupleModel& tuple, const TupleTransform& t) {
  const std::size_t m = tuple.boundary_dim();
  if (t.v.rows() != m || t.v_natural.rows() != m) throw InvalidInput("transform dimension mismatch");
  BoundaryTupleModel tri = tuple;
  tri.gamma0 = linalg::solve(t.v, tuple.gamma0);
  tri.gamma1 = t.v_natural * tuple.gamma1;
  tri.gram_minus = tuple.gram_pivot;
  tri.gram_plus = tuple.gram_pivot;
  tri.pairing = tuple.gram_pivot.matrix();
  return TriplePair{tri, dual_triple(tri)};
}

ComplexMatrix natural_adjoint(const ComplexMatrix& z, const BoundaryTupleModel& tuple) {
  const std::size_t m = tuple.boundary_dim();
  if (z.rows() != m || z.cols() != m) throw InvalidInput("impedance matrix has the wrong size");
  return linalg::solve(tuple.pairing, z.adjoint() * tuple.pairing.adjoint());
}

double natural_adjoint_defect(const ComplexMatrix& z, const ComplexMatrix& zn,
                              const BoundaryTupleModel& tuple) {
  // <Z e_i, e_j> = (P Z)_{ji};  <e_i, Zn e_j> = ((Zn)* P*)_{ji}.
  const ComplexMatrix lhs = tuple.pairing * z;
  const ComplexMatrix rhs = zn.adjoint() * tuple.pairing.adjoint();
  return (lhs - rhs).max_abs();
}

double accretivity_defect(const ComplexMatrix& z, const BoundaryTupleModel& tuple) {
  const std::size_t m = tuple.boundary_dim();
  if (z.rows() != m || z.cols() != m) throw InvalidInput("impedance matrix has the wrong size");
  if (m == 0) return 0.0;
  // Re y* P Z y over ||y||_{-,+} = 1: substitute y = U^{-1} w.
  const ComplexMatrix h = (tuple.pairing * z).hermitian_part();
  const auto& g = tuple.gram_minus;
  const ComplexMatrix w = g.right_factor_solve(g.right_factor_solve(h).adjoint());
  return linalg::hermitian_eig(w, false).values.front();
}

bool traces_full_rank(const BoundaryTupleModel& tuple, double tol) {
  const ComplexMatrix stacked = linalg::vstack(tuple.gamma0, tuple.gamma1);
  if (stacked.rows() == 0) return true;
  return linalg::numerical_rank(stacked, tol) == stacked.rows();
}

}  // namespace gibc::tuple
