#pragma once

// Cayley parametrization of boundary conditions and the restrictions of A*
// they generate.

#include <string>
#include <vector>

#include "gibc/boundary_tuple.hpp"

namespace gibc::ext {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::GramMatrix;
using tuple::BoundaryTupleModel;
using tuple::OperatorModel;
using tuple::TupleTransform;

inline constexpr double kContractionSlack = 1e-10;

// A boundary condition in contraction form: K acts on H.
struct ContractionParam {
  ComplexMatrix k;

  double norm(const GramMatrix& pivot) const { return linalg::gram_operator_norm(k, pivot, pivot); }
  bool is_contraction(const GramMatrix& pivot, double slack = kContractionSlack) const {
    return norm(pivot) <= 1.0 + slack;
  }
};

// A boundary condition in impedance form: Z maps H_{-,+} to H_{+,-}.
struct ImpedanceMatrix {
  ComplexMatrix z;
};

// (Z - I)(Z + I)^{-1}. Throws InvalidInput when -1 is an eigenvalue of Z.
ContractionParam cayley(const ComplexMatrix& z);
// (I - K)^{-1}(I + K). Throws InvalidInput when 1 is an eigenvalue of K.
ComplexMatrix inverse_cayley(const ContractionParam& k);
// ||(C(Z) + I) - 2 Z (Z + I)^{-1}||
double cayley_identity_defect(const ComplexMatrix& z);
// cayley(V^natural Z V)
ContractionParam impedance_to_contraction(const ComplexMatrix& z, const BoundaryTupleModel& tuple,
                                          const TupleTransform& t);

enum class Source { from_k, from_z };
std::string to_string(Source s);

struct ExtensionModel {
  ComplexMatrix op;     // Galerkin compression Q* G A* Q
  ComplexMatrix basis;  // Q, G-orthonormal columns spanning the admissible subspace
  Source source = Source::from_k;
  GramMatrix gram;

  // Data kept for resolvent comparisons.
  ComplexMatrix astar;
  ComplexMatrix gamma0v;     // V^{-1} Gamma0
  ComplexMatrix gamma1v;     // V^natural Gamma1
  ComplexMatrix test_basis;  // G-orthonormal basis of ker Gamma1^V
  ComplexMatrix constraint;

  // ||(I - Q Q* G) A* Q||_G / ||A* Q||_G. Diagnostic only: a finite
  // admissible subspace is not invariant under A* in general.
  double invariance_defect = 0.0;
  std::string note;
};

// Restriction of A* by (K + I) Gamma0^V + i (K - I) Gamma1^V = 0.
ExtensionModel restrict_extension(const OperatorModel& model, const BoundaryTupleModel& tuple,
                                  const TupleTransform& t, const ContractionParam& k);
// Restriction of A* by Z Gamma0 - i Gamma1 = 0.
ExtensionModel restrict_extension(const OperatorModel& model, const BoundaryTupleModel& tuple,
                                  const TupleTransform& t, const ImpedanceMatrix& z);

// Contraction-form constraint matrix in triple coordinates.
ComplexMatrix k_constraint(const ComplexMatrix& k, const ComplexMatrix& gamma0v,
                           const ComplexMatrix& gamma1v);

struct ResolventCheck {
  cplx z;
  double bound;  // ||(T - z)^{-1}|| Im z
};

struct MdissReport {
  double max_im_numrange = 0.0;
  std::vector<ResolventCheck> resolvent_checks;
  std::vector<cplx> eigs;

  bool dissipative(double tol) const { return max_im_numrange <= tol; }
  bool resolvent_bounds_hold(double tol) const;
};

const std::vector<cplx>& default_resolvent_points();

// Throws InvariantViolation when T - z is singular at a test point although
// the numerical range certifies dissipativity.
MdissReport mdissipativity_report(const ExtensionModel& ext,
                                  const std::vector<cplx>& points = default_resolvent_points(),
                                  double tol = 1e-10);

struct RankReport {
  std::size_t rank_resolvent_diff = 0;
  std::size_t rank_k_diff = 0;
  bool violation = false;
  std::vector<double> resolvent_profile;  // singular values of R2 - R1
  std::vector<double> k_profile;          // singular values of K2 - K1
};

// Resolvents are Petrov-Galerkin solves with the common test space
// ker Gamma1^V: R_j = [Y* G (A* - z); C_j]^{-1} [Y* G; 0]. Throws
// InvalidInput when z is (numerically) in either spectrum, or when an
// extension does not match its contraction.
RankReport resolvent_difference_rank(const ExtensionModel& e1, const ExtensionModel& e2, cplx z,
                                     const ContractionParam& k1, const ContractionParam& k2,
                                     double tol = linalg::kRankTol);

}  // namespace gibc::ext
