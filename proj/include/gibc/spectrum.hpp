#pragma once

#include <string>
#include <vector>

#include "gibc/linalg.hpp"

namespace gibc {

struct Eigenvalue {
  linalg::cplx lambda;
  double residual = 0.0;
  std::string tag;
  int multiplicity = 1;
  bool artifact = false;  // lambda = 0 modes of the quotient construction
};

struct SpectrumReport {
  std::vector<Eigenvalue> values;
  bool critical_damping = false;
  double cross_check = 0.0;  // max discrepancy against an independent route
  std::vector<std::string> notes;

  double max_imag(bool skip_artifacts = true) const;
};

}  // namespace gibc
