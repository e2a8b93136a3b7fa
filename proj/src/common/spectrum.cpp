#include "gibc/spectrum.hpp"

#include <algorithm>
#include <limits>

namespace gibc {

double SpectrumReport::max_imag(bool skip_artifacts) const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : values)
    if (!(skip_artifacts && v.artifact)) m = std::max(m, v.lambda.imag());
  return m;
}

}  // namespace gibc
