#pragma once

// Shipped operator models with boundary tuples. Each model acts on values at
// Chebyshev-Lobatto points of [0, 1]; the state inner product is the exact
// L2 product of the polynomial interpolants, so the Green identity holds up
// to rounding for every state vector.
//
//   transport-<n>      A* = i d/dx, Gamma0 f = (f(0)+f(1))/sqrt2,
//                      Gamma1 f = i(f(1)-f(0))/sqrt2, trivial duality.
//   sturm-<n>          A* = -d2/dx2, Gamma0 f = (f(0), f(1)),
//                      Gamma1 f = (f'(0), -f'(1)), trivial duality.
//   rigged-sturm-<n>   sturm with Gamma0 scaled by diag(w) and the pairing
//                      diag(1/w); the three boundary Grams differ.

#include <random>
#include <string>
#include <vector>

#include "gibc/boundary_tuple.hpp"

namespace gibc::fixtures {

struct CollocationFixture : tuple::Fixture {
  std::vector<double> nodes;
};

CollocationFixture transport(std::size_t n = 64);
CollocationFixture sturm(std::size_t n = 32);
CollocationFixture rigged_sturm(std::size_t n = 32);

// Accepts "transport-64", "sturm-32", "rigged-sturm-24", ...
CollocationFixture by_name(const std::string& name);
std::vector<std::string> default_names();

// Samples a random sum of a few complex exponentials with non-integer
// frequencies (|w| <= 12) at the nodes.
tuple::Vector random_smooth_state(const std::vector<double>& nodes, std::mt19937_64& rng);

}  // namespace gibc::fixtures
