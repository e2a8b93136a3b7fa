#pragma once

// Finite models of an operator A* together with an m-boundary tuple
// (H_{-,+}, H, H_{+,-}, Gamma0, Gamma1).
//
// Conventions. Inner products are linear in the first slot: (f|g) = g* G f.
// The duality between H_{+,-} and H_{-,+} is encoded by a matrix P:
//   <x, y>   = y* P x      for x in H_{+,-}, y in H_{-,+}
//   <y, x>   = x* P* y     for y in H_{-,+}, x in H_{+,-}
// Gamma0 lands in H_{-,+}, Gamma1 in H_{+,-}, and an impedance Z maps
// H_{-,+} to H_{+,-}.

#include <string>
#include <vector>

#include "gibc/linalg.hpp"

namespace gibc::tuple {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::GramMatrix;
using linalg::Vector;

struct OperatorModel {
  ComplexMatrix astar;
  GramMatrix gram_x;
  std::string label;

  std::size_t dim() const { return astar.rows(); }
  void validate() const;
};

struct BoundaryTupleModel {
  ComplexMatrix gamma0;
  ComplexMatrix gamma1;
  GramMatrix gram_minus;  // H_{-,+}
  GramMatrix gram_pivot;  // H
  GramMatrix gram_plus;   // H_{+,-}
  ComplexMatrix pairing;

  std::size_t boundary_dim() const { return gamma0.rows(); }
  void validate(std::size_t model_dim) const;
  // Every Gram and the pairing are identities.
  bool trivial_duality(double tol = 1e-14) const;
};

// A tuple together with the operator it belongs to and the accuracy its
// discretization supports.
struct Fixture {
  OperatorModel model;
  BoundaryTupleModel tuple;
  double tolerance = 1e-8;
  std::string notes;
};

struct TupleTransform {
  ComplexMatrix v;          // H -> H_{-,+}
  ComplexMatrix v_natural;  // H_{+,-} -> H

  // Builds V^natural = G_pivot^{-1} V* P from V. Throws InvalidInput for a
  // singular V.
  static TupleTransform from_v(const ComplexMatrix& v, const BoundaryTupleModel& tuple);
  static TupleTransform identity(const BoundaryTupleModel& tuple);
  // max |<V e_i, e_j> - (e_i | V^natural e_j)_H| over basis pairs.
  double pairing_defect(const BoundaryTupleModel& tuple) const;
};

// (A*f|g) - (f|A*g) - <Gamma1 f, Gamma0 g> + <Gamma0 f, Gamma1 g>
cplx green_defect(const OperatorModel& model, const BoundaryTupleModel& tuple,
                  std::span<const cplx> f, std::span<const cplx> g);
// Boundary part <Gamma1 f, Gamma0 g> - <Gamma0 f, Gamma1 g> alone.
cplx boundary_form(const BoundaryTupleModel& tuple, std::span<const cplx> f,
                   std::span<const cplx> g);

struct TriplePair {
  BoundaryTupleModel triple;  // (H, V^{-1} Gamma0, V^natural Gamma1)
  BoundaryTupleModel dual;    // (H, i Gamma1^V, -i Gamma0^V)
};
TriplePair to_boundary_triple(const BoundaryTupleModel& tuple, const TupleTransform& t);
// (Gamma0, Gamma1) -> (i Gamma1, -i Gamma0) on a triple with trivial duality.
BoundaryTupleModel dual_triple(const BoundaryTupleModel& triple);

// Z^natural = P^{-1} Z* P*, so that <Z f, g> = <f, Z^natural g>.
ComplexMatrix natural_adjoint(const ComplexMatrix& z, const BoundaryTupleModel& tuple);
// max over basis pairs of |<Z e_i, e_j> - <e_i, Zn e_j>|.
double natural_adjoint_defect(const ComplexMatrix& z, const ComplexMatrix& zn,
                              const BoundaryTupleModel& tuple);

// min over y with ||y||_{-,+} = 1 of Re <Z y, y>.
double accretivity_defect(const ComplexMatrix& z, const BoundaryTupleModel& tuple);

// Finite stand-in for surjectivity of (Gamma0, Gamma1): full row rank of the
// stacked trace matrix.
bool traces_full_rank(const BoundaryTupleModel& tuple, double tol = linalg::kRankTol);

// Tuple with every Gram and the pairing equal to the identity.
BoundaryTupleModel trivial_tuple(ComplexMatrix gamma0, ComplexMatrix gamma1);

}  // namespace gibc::tuple
