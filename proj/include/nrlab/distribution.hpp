#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nrlab/arith_seq.hpp"
#include "nrlab/characters.hpp"
#include "nrlab/errors.hpp"
#include "nrlab/sieve.hpp"

namespace nrlab {

// Residue class a (r) with 1 <= a <= r; primitive means gcd(a, r) = 1.
struct ResidueClass {
  uint64_t a = 1;
  uint64_t r = 1;
  bool primitive() const;
};

// Signed discrepancy of a finitely supported sequence in the class a (r):
//
//   sum_{n = a (r)} seq(n)  -  (1/phi(r)) sum_{gcd(n,r)=1} seq(n)
//
// NotPrimitive unless gcd(a, r) = 1.
double discrepancy(const ArithSeq& seq, const ResidueClass& cls);

// E(x, theta) = sum_{r < x^theta} sup_a |disc(Lambda restricted to [1,x]; a (r))|
// with the sup taken by exhaustive enumeration of primitive classes (ties to
// the smallest a). Nonnegative terms make it nondecreasing in theta.
double eh_statistic(uint64_t x, double theta, const SieveTables& sv);

struct LevelSweepReport {
  uint64_t x = 0;
  std::vector<double> thetas;
  std::vector<double> E;         // E(x, theta)
  std::vector<double> E_over_x;  // normalized
};

// Sweep E(x, .) over a theta grid; entries are computed independently per
// grid index (parallel across indices, each writing only its own slot).
LevelSweepReport eh_sweep(uint64_t x, const std::vector<double>& thetas,
                          const SieveTables& sv, unsigned threads = 1);

// The bilinear dispersion experiment: a smooth squarefree window D near M
// weighted by the character, against the interval [N/2, N].
struct TypeIIExperiment {
  DirichletCharacter chi;
  uint64_t q = 0;
  double A = 1.0;
  double eps = 0.0, delta = 0.0, varpi = 0.0;
  uint64_t x = 0, N = 0, M = 0;
  uint64_t j = 1;          // shift index for the jq displacement
  uint64_t window_lo = 1;  // D lives in [window_lo, M]
  std::vector<uint64_t> D;
  ArithSeq alpha;  // alpha(m) = chi(m) on D (real chi), exact mode
  ArithSeq beta;   // indicator of [N/2, N], exact mode
};

// Scales are pinned for reproducibility:
//   N = round(q^{1/2 - 2 varpi + eps}),  x = floor(N^{1/(1/2 - 2 varpi)}),
//   M = round(x / N),
// so that N = round(x^{1/2 - 2 varpi}) and N*M stays within a factor 2 of x.
// D = { m in [(1 - log^{-10A-10} x) M, M] : m squarefree, all prime factors
// in [q^eps, x^delta], gcd(m, q) = 1 }. Empty D -> EmptyWindow. Real chi
// only (the sequences are stored exactly).
TypeIIExperiment build_experiment(const DirichletCharacter& chi, uint64_t q,
                                  double A, double eps, double delta,
                                  double varpi, const SieveTables& sv);

// sum over squarefree r | P with r <= x^{1/2 + 2 varpi} of
// |disc(alpha*beta; a (r))|, where P is the product of the primes in
// [q^eps, x^delta] not dividing q. Moduli are enumerated depth-first as
// products of distinct window primes with the cap pruning the recursion.
// NotCoprime unless gcd(a, P) = 1.
double typeii_statistic(const TypeIIExperiment& exp, uint64_t a,
                        const SieveTables& sv);

struct DispersionReport {
  uint64_t j = 0;
  double X = 0.0;          // sum_n conv(n) conv(n - jq)
  double gamma = 0.0;      // (2/x) sum_n conv(n)
  double reference = 0.0;  // gamma^2 x / 2
  bool disjoint_support = false;  // jq beyond x: X = 0 by fiat
};

// Dispersion at the experiment's shift j. Also recomputes the exact
// factorization sum conv = (sum alpha)(sum beta) and refuses to return if
// the convolution violates it (IdentityViolation; cannot happen).
DispersionReport dispersion_X(const TypeIIExperiment& exp);

// Sweep 1 <= j <= floor(q^eps) and return the report maximizing
// |X - gamma^2 x/2| (ties to the smallest j).
DispersionReport dispersion_max_shift(const TypeIIExperiment& exp);

struct ChiCorrelationReport {
  uint64_t J = 0;
  std::complex<double> raw;       // sum_{j<=J} sum_{n<=x} chi(n) conv(n + jq)
  std::complex<double> factored;  // J (sum chi alpha)(sum chi beta)
  bool shift_leak = false;  // support escaped (jq, x + jq] for some j <= J;
                            // the factorization is then not applicable
};

// The shift-and-factor identity: when the support of alpha*beta sits inside
// (jq, x + jq] for every j <= J, each shifted sum telescopes to
// (sum chi alpha)(sum chi beta) because chi(n + jq) = chi(n) mod q. The raw
// sum is always returned; the leak flag marks when the identity does not
// apply.
ChiCorrelationReport chi_correlation(const TypeIIExperiment& exp, uint64_t J);

// sum_{n<=x} tau_k(n) tau_k(n + h), exact (128-bit accumulation; Overflow if
// the total exceeds 64 bits).
uint64_t divisor_correlation(uint32_t k, uint64_t x, uint64_t h,
                             const SieveTables& sv);

// k-fold multiplicative self-convolution of the indicator of [1/2, 1],
// evaluated at t. In the variable u = -log t this is the k-fold additive
// convolution of the indicator of [0, log 2]: k = 1 is the indicator, k = 2
// the closed-form triangle min(u, 2 log 2 - u), and k >= 3 iterates
//   Phi_{k+1}(u) = F_k(u) - F_k(u - log 2)
// with F_k the trapezoid antiderivative on a grid of `grid` cells per
// log 2. GridTooCoarse below 16 cells.
double psi_k(uint32_t k, double t, uint32_t grid);

// integral of psi_k(t)^2 dt = integral of Phi_k(u)^2 e^{-u} du; exact 1/2
// for k = 1, trapezoid on the same grid otherwise.
double psi_k_sq_integral(uint32_t k, uint32_t grid);

struct BetaKReport {
  uint64_t q = 0;
  uint32_t k = 0;
  uint64_t x = 0;  // product of the N_i
  uint64_t j = 1;
  double X = 0.0;          // sum_n conv(n) conv(n - jq)
  double gamma = 0.0;      // (2/x) sum_n conv(n)
  double sum_conv = 0.0;   // sum_n conv(n), equal to prod_i sum beta_i
  double reference = 0.0;  // gamma^2 x integral(psi_k^2)
  double psi_sq = 0.0;     // integral(psi_k^2 dt) used above
};

// Pure interval variant: conv = beta_1 * ... * beta_k with beta_i the
// indicator of [N_i/2, N_i], shifted by j = 1 times the conductor of chi.
// Requires N_1 >= ... >= N_k >= 1 and x = prod N_i >= q (WindowTooSmall
// below). A is accepted for interface parity with build_experiment but does
// not enter the interval construction.
BetaKReport betak_experiment(const DirichletCharacter& chi, uint32_t k,
                             const std::vector<uint64_t>& Ns, double A,
                             uint32_t grid = 2048);

}  // namespace nrlab
