#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "nrlab/characters.hpp"
#include "nrlab/errors.hpp"
#include "nrlab/sieve.hpp"

namespace nrlab {

// Piecewise-constant function on [0, T]: value on [i*h, (i+1)*h) is values[i]
// (right-continuous).  All solvers below exploit the fact that for two such
// step functions the convolution integral over a whole number of cells is a
// plain product sum:
//
//   int_0^{nh} a(u) b(nh - u) du  =  h * sum_{i<n} a_i b_{n-1-i}
//
// exactly, because on u in [ih, (i+1)h) the factor a is the constant a_i and
// b(nh - u) is the constant b_{n-1-i} except at one point of measure zero.
// Stepping with this rule keeps the forward solve and the deconvolution exact
// mutual inverses and avoids the alternating artifacts a trapezoid rule
// produces when the data has jumps.
struct StepFunction {
  double h = 0.0;
  double T = 0.0;
  std::vector<double> values;
  double bound = 0.0;  // declared magnitude bound; 0 means none declared

  size_t size() const { return values.size(); }
  double grid(size_t i) const { return h * static_cast<double>(i); }

  // Right-continuous lookup; t == T maps to the last cell.
  double at(double t) const;

  // Index of the cell containing t, with a snap guard so that t computed as
  // n*h in floating point lands in cell n, not n-1.
  size_t cell(double t) const;

  bool within_bound() const;

  static StepFunction constant(double c, double T, double h);
};

// Breakpoints of the Heath-Brown closed forms.
inline const double kHeathBrownC1 = 0.25 * std::exp(-0.5);  // 1/(4*sqrt(e))
inline const double kHeathBrownC2 = 0.25;
inline const double kHeathBrownC3 = 0.5 * std::exp(-0.5);  // 1/(2*sqrt(e))

// Forward solve of  t*a(t) = int_0^t a(u) b(t-u) du  with a = 1 on [0,kappa].
// kappa < 2h -> GridTooCoarse.
StepFunction solve_a_given_b(const StepFunction& b, double kappa);

// Deconvolution: recover b on [0, T-h] from  int_0^t a(t-u) b(u) du = t*a(t),
// bootstrapped by the leading segment a = 1 on [0, kappa] (kappa >= 2h).
// a(0+) != 1 -> BadSeed.
StepFunction solve_b_given_a(const StepFunction& a, double kappa);

// Closed forms: a = 1, then 1 - 2*log(4*sqrt(e)*t), then 0; b = 1, then -1 on
// (c1, c2], then continued for t > c2 by b(t) = 2 int_{c1}^{c2} b(t-u) du/u
// evaluated by grid quadrature.
std::pair<StepFunction, StepFunction> heathbrown_reference(double T, double h);

// |b(t) - 2 int_{c1}^{c2} b(t-u) du/u| by trapezoid quadrature with exact
// bounds.  The equation is only meaningful past c2: t <= 1/4 + 2h ->
// OutOfDomain.
double delay_equation_residual(const StepFunction& b, double t);

// |t*a(t) - int_0^t a(u) b(t-u) du| at the grid point nearest t, with the
// integral taken by the exact product-sum rule above.
double wirsing_residual(const StepFunction& a, const StepFunction& b, double t);

// Trapezoid value of 2 int_{c1}^{c2} du/u with steps of size about h; the
// exact value is 1.
double heathbrown_kernel_mass(double h);

// Logarithmic density profiles of a character:
//   A_q(t) = (1/log q) sum_{n < q^t} chi(n)/n
//   B_q(t) = (1/log q) sum_{n < q^t} chi(n) Lambda(n)/n
// sampled at grid+1 evenly spaced t in [0, T].  q^T beyond the sieve ->
// LimitExceeded.
struct DensityProfile {
  uint64_t q = 0;
  std::vector<double> ts;
  std::vector<std::complex<double>> A;
  std::vector<std::complex<double>> B;
};

DensityProfile log_density_profiles(const DirichletCharacter& chi, double T,
                                    size_t grid, const SieveTables& sv);

}  // namespace nrlab
