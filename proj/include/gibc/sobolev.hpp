#pragma once

// Fractional Sobolev scale on the unit circle and pointwise multipliers
// M_zeta : H^s -> H^{-s}. The H^s norm is ||u||^2 = sum_n w_n^2 |u_n|^2 with
// w_n = (1 + n^2)^{s/2}; in unit-ball coordinates of H^s and H^{-s} the
// multiplier has entries zeta_hat(m - n) / (w_m w_n).

#include <functional>
#include <string>
#include <vector>

#include "gibc/linalg.hpp"

namespace gibc::sobolev {

using linalg::ComplexMatrix;
using linalg::cplx;

struct SobolevScale {
  double s = 0.5;
  std::size_t n = 0;
  std::vector<double> weights;  // w_{-N..N}

  static SobolevScale make(double s, std::size_t n);
  double weight(long k) const { return weights[static_cast<std::size_t>(k + static_cast<long>(n))]; }
};

double sobolev_weight(double s, long k);

enum class CoeffKind { constant, sampled, fourier, power_singular };

struct ImpedanceCoefficient {
  CoeffKind kind = CoeffKind::constant;
  cplx value{};                     // constant
  std::vector<cplx> samples;        // sampled: values at theta_j = 2 pi j / M
  std::function<cplx(double)> fn;   // sampled: optional closed form, resampled on demand
  std::vector<cplx> coeffs;         // fourier: zeta_hat(-K..K)
  double a = 0.0;                   // power_singular: strength |theta|^{-a}
  cplx strength{1.0, 0.0};
  bool accretive_claimed = false;
  std::string label;

  static ImpedanceCoefficient constant(cplx c);
  static ImpedanceCoefficient sampled(std::vector<cplx> values);
  static ImpedanceCoefficient function(std::function<cplx(double)> f, std::string label);
  static ImpedanceCoefficient fourier(std::vector<cplx> coeffs);
  static ImpedanceCoefficient power(double a, cplx strength = 1.0);

  // Value at theta in (-pi, pi].
  cplx evaluate(double theta) const;
  // min Re zeta over a fine grid (exact for constant and power kinds).
  double min_real_part() const;
  // Throws InvalidInput when accretivity is claimed but violated, or a >= 1.
  void validate() const;
};

// zeta_hat(k) = (1/2pi) int_{-pi}^{pi} zeta(theta) e^{-ik theta} d theta for
// k = -n_max..n_max.
std::vector<cplx> fourier_coeffs(const ImpedanceCoefficient& zeta, std::size_t n_max,
                                 std::size_t quad_points = 0);

// (1/pi) int_0^pi theta^{-a} cos(k theta) d theta by graded quadrature.
double power_cosine_integral(double a, double k);

ComplexMatrix multiplier_section(const ImpedanceCoefficient& zeta, double s, std::size_t n);

// An operator H^s -> H^{-s} given by its Fourier matrix entries Z_{mn}.
struct ExplicitOperator {
  std::function<cplx(long m, long n)> entry;
  std::string label;
};
// Z = i Lambda^{2s}: Fourier-diagonal with Z_n = i (1 + n^2)^s. Its unit-ball
// section is i I at every truncation.
ExplicitOperator i_lambda(double s);
ComplexMatrix operator_section(const ExplicitOperator& op, double s, std::size_t n);

enum class Verdict { compact, non_compact, inconclusive };
std::string to_string(Verdict v);

struct GateThresholds {
  double theta_c = 1e-2;     // tail below this at the last section: compact
  double theta_n = 0.5;      // tail above this on every section: non-compact
  double min_rate = 0.5;     // decay exponent per section step for the rate rule
  double monotone_slack = 0.1;
};

struct CompactnessReport {
  double s = 0.5;
  std::vector<std::size_t> sections;
  std::vector<std::vector<double>> singular_profiles;
  std::vector<double> tail_indicator;      // sigma_{ceil(N/2)} / sigma_1
  std::vector<double> decay_rates;         // log(t_i / t_{i+1}) / log(N_{i+1} / N_i)
  std::vector<double> accretivity_defect;  // min eig of the Hermitian part
  Verdict verdict = Verdict::inconclusive;
  std::string rule;  // which rule fired; non-compact is always heuristic
  GateThresholds thresholds;
};

CompactnessReport compactness_gate(const ImpedanceCoefficient& zeta, double s,
                                   const std::vector<std::size_t>& schedule,
                                   const GateThresholds& th = {});
CompactnessReport compactness_gate(const ExplicitOperator& op, double s,
                                   const std::vector<std::size_t>& schedule,
                                   const GateThresholds& th = {});

const std::vector<std::size_t>& default_schedule();

struct LqReport {
  double q = 2.0;
  double lq_norm = 0.0;  // +inf when divergent
  bool finite = true;
  bool accretive = true;
  bool theorem_applies = false;
  double holder_ratio = 0.0;  // max_N ||B_N|| / lq_norm
};

LqReport lq_report(const ImpedanceCoefficient& zeta, double q, double s,
                   const std::vector<std::size_t>& schedule = default_schedule());

}  // namespace gibc::sobolev
