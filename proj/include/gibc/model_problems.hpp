#pragma once

// Closed-form and semi-analytic spectra of two damped wave problems.
//
// String on (0, 1): -p'' = lambda^2 p, p(0) = 0, p'(1) = i lambda zeta p(1).
// With p = sin(lambda x) the boundary condition reads
//   g(lambda) = i zeta sin(lambda) - cos(lambda) = 0,
// equivalently e^{2 i lambda} = (zeta + 1) / (zeta - 1).
//
// Unit disk: -Laplace p = lambda^2 p, d_n p = i lambda zeta p on r = 1. With
// p = J_m(lambda r) e^{i m theta}:
//   h(lambda) = i zeta J_m(lambda) - J_m'(lambda) = 0.

#include <vector>

#include "gibc/linalg.hpp"
#include "gibc/spectrum.hpp"

namespace gibc::models {

using linalg::cplx;

struct StringSpec {
  cplx zeta{};
  std::size_t n_modes = 10;
  bool mirrored = false;  // also report n = -n_modes..-1
  bool allow_nonaccretive = false;
};

cplx string_closed_form(cplx zeta, long n);
cplx string_characteristic(cplx zeta, cplx lambda);
// Newton on g, continued in t from zeta = 0 (root (n + 1/2) pi) to t = 1 when
// |zeta| < 1, otherwise started next to the closed-form root.
cplx string_newton_root(cplx zeta, long n);

// Modes n = 0..n_modes-1 by the closed form. cross_check holds the largest
// distance from a Newton root to the closed-form set. zeta = 1 returns an
// empty spectrum with critical_damping set.
SpectrumReport string_spectrum(const StringSpec& spec);

struct BesselValue {
  cplx value;
  cplx derivative;
};

// J_m(z) and J_m'(z) for m >= 0 and |z| <= 200.
BesselValue bessel_j(int m, cplx z);

struct Box {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
  bool contains(cplx z, double pad = 0.0) const {
    return z.real() >= re_min - pad && z.real() <= re_max + pad && z.imag() >= im_min - pad &&
           z.imag() <= im_max + pad;
  }
};

cplx disk_characteristic(int m, cplx zeta, cplx lambda);
// Order of the zero of h at lambda = 0. That zero is not an eigenvalue (the
// mode J_m(0 r) vanishes or is the constant kernel) and is divided out.
int disk_zero_order(int m, cplx zeta);

struct RootSearch {
  std::vector<cplx> roots;
  std::vector<double> residuals;  // |h(root)|
  std::size_t contour_count = 0;
  int retries = 0;
  Box box;  // the box actually used after perturbation
};

RootSearch disk_mode_roots(int m, cplx zeta, const Box& box);

struct DiskSpec {
  cplx zeta{};
  int m_max = 8;
  Box box{-20.0, 20.0, -5.0, 0.5};
  bool allow_nonaccretive = false;
};

struct DiskReport : SpectrumReport {
  std::vector<RootSearch> modes;  // index m
  bool counts_match = true;
  double min_gap = 0.0;  // smallest distance between distinct roots
  bool isolated = true;
};

DiskReport disk_spectrum(const DiskSpec& spec);

}  // namespace gibc::models
