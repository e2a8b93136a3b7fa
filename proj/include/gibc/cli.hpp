#pragma once

// Command-line front end. Exit codes: 0 success, 2 invariant violation,
// 3 invalid input or usage error, 4 numerical or I/O failure.

#include <iosfwd>
#include <string>
#include <vector>

#include "gibc/fem2d.hpp"
#include "gibc/sobolev.hpp"

namespace gibc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 2;
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitFailure = 4;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "0.5", "0.5,-1", "const:0.5,-1"
linalg::cplx parse_complex(const std::string& spec);
// Strictly increasing positive integers: "16,32,64".
std::vector<std::size_t> parse_schedule(const std::string& spec);

// Coefficient on the circle: number | re,im | const:re,im | power:a=..,c=..[,ci=..]
// | file:path (one sample per line, "re" or "re im", at theta_j = 2 pi j / M).
sobolev::ImpedanceCoefficient parse_circle_zeta(const std::string& spec);

// Coefficient on mesh boundary labels: number | re,im | const:re,im applied to
// every label, or file:path with lines "label re [im]". Overrides are
// "label=re[,im]".
fem::BoundaryZeta parse_mesh_zeta(const std::string& spec, const fem::Mesh& mesh,
                                  const std::vector<std::string>& overrides = {});

}  // namespace gibc::cli
