#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "nrlab/errors.hpp"
#include "nrlab/sieve.hpp"

namespace nrlab {

// Jacobi symbol (n/q) for odd q >= 3; InvalidModulus on even q. For prime q
// this is the Legendre symbol: 1 on nonzero squares, -1 otherwise, 0 on
// multiples of q.
int jacobi(int64_t n, uint64_t q);

// A character is stored as its exponent map: e(n) in {0..d-1} with
// chi(n) = e^(2*pi*i*e(n)/d), and e(n) undefined (kNoExponent) when
// gcd(n, q) > 1. Keeping exponents instead of complex values makes
// multiplicativity and full-period orthogonality exactly testable: the sum
// over a period is zero iff the d exponent classes are hit equally often.
//
// Two kinds are supported: quadratic characters of odd modulus via the
// Jacobi symbol (covers composite and prime q; principal exactly when q is a
// perfect square), and general characters of prime modulus defined by their
// order d | p-1 through a fixed primitive root g, chi(g^t) = e^(2*pi*i*t/d).
class DirichletCharacter {
 public:
  enum class Kind { quadratic, prime_general };
  static constexpr uint64_t kNoExponent = ~0ull;

  // Jacobi character mod odd q >= 3.
  static DirichletCharacter quadratic(uint64_t q);

  // Canonical character of order d mod odd prime p, d | p-1. The generator
  // is the least primitive root; discrete logs come from a full table for
  // p < 1e6 and baby-step giant-step above.
  static DirichletCharacter prime_general(uint64_t p, uint64_t d,
                                          const SieveTables& sv);

  Kind kind() const { return kind_; }
  uint64_t modulus() const { return q_; }
  uint64_t order() const { return d_; }
  uint64_t generator() const;  // prime_general only (WrongKind otherwise)
  bool principal() const { return principal_; }
  bool real_valued() const { return d_ <= 2; }

  uint64_t exponent(int64_t n) const;  // kNoExponent when chi(n) = 0
  std::complex<double> value(int64_t n) const;
  int ivalue(int64_t n) const;  // {-1, 0, 1}; WrongKind unless real_valued

  // Discrete log base the stored generator, for prime_general characters.
  uint64_t dlog(uint64_t n) const;

 private:
  DirichletCharacter() = default;

  Kind kind_ = Kind::quadratic;
  uint64_t q_ = 0, d_ = 1, g_ = 0;
  bool principal_ = false;
  // Full dlog table for small prime modulus (index n -> log_g n), shared so
  // characters stay cheap to copy.
  std::shared_ptr<const std::vector<uint32_t>> dlog_table_;
  // Baby steps g^j -> j for j < ceil(sqrt(p-1)), used when no full table.
  std::shared_ptr<const std::vector<std::pair<uint64_t, uint32_t>>> baby_;
  uint64_t giant_ = 0;  // g^{-m} for the giant stride
  uint64_t bsgs_m_ = 0;
};

// Smallest n >= 2 with (n/p) = -1; always prime. InvalidPrime unless p is an
// odd prime.
uint64_t least_nonresidue(uint64_t p);

// Smallest n >= 1 with chi(n) != 1 (including chi(n) = 0). NoSuchElement for
// principal characters. Equals least_nonresidue(p) for quadratic chi mod
// prime p.
uint64_t least_nonone(const DirichletCharacter& chi);

// Smallest generator of (Z/pZ)^x, certified by g^((p-1)/r) != 1 for every
// prime r | p-1. Needs p <= sv.limit() to factor p-1.
uint64_t least_primitive_root(uint64_t p, const SieveTables& sv);

// Sum of chi(n) over lo <= n <= hi. Computed from exponent-class counts, so
// full periods cancel to exactly zero and quadratic sums are exact integers
// in the real part.
std::complex<double> char_sum(const DirichletCharacter& chi, uint64_t lo,
                              uint64_t hi);

// Prefix sums S(t) = sum_{n<=t} chi(n) for all t <= T. Quadratic prefixes
// are +-1 sums, hence exactly representable.
class CharSumProfile {
 public:
  CharSumProfile(const DirichletCharacter& chi, uint64_t T);
  uint64_t tmax() const { return tmax_; }
  uint64_t modulus() const { return q_; }
  std::complex<double> prefix(uint64_t t) const;  // S(t), t <= tmax

 private:
  uint64_t q_, tmax_;
  std::vector<std::complex<double>> prefix_;
};

struct DyadicBlock {
  uint64_t n = 0;       // block label N; the block is (N/2, N] intersected
  uint64_t lo = 0;      // with [1, X-1], so the blocks tile [1, X)
  uint64_t hi = 0;
  std::complex<double> sum;
  double magnitude = 0.0;
  size_t block_count = 0;
};

// Maximal dyadic block of [1, X): labels N = X, X/2, X/4, ... halving to 1.
// Because the blocks tile [1, X) disjointly, the pigeonhole bound
// magnitude >= |S(X-1)| / block_count holds exactly. Ties go to the larger N.
DyadicBlock dyadic_max_block(const CharSumProfile& profile, uint64_t X);

// (1/sqrt(e)) * (1/2 - 2*varpi); OutOfRange unless 0 <= varpi <= 1/4.
double vinogradov_exponent(double varpi);

struct MertensReport {
  uint64_t q = 0, x = 0, nq = 0;
  uint64_t checked = 0;     // n <= x with gcd(n, q) = 1
  uint64_t violations = 0;  // pointwise failures (expected 0)
  double lhs = 0.0;         // sum_{n<x} chi(n)
  double rhs = 0.0;         // x - 1 - 2 * sum_{nq <= p <= x} (x/p + 1)
  bool holds = false;       // lhs >= rhs
};

// Pointwise check chi(n) >= 1 - 2*#{p | n : p >= n(q)} for all n <= x
// coprime to q, plus the Mertens-style aggregate bound. The prime count must
// include p = n(q) itself: chi(n(q)) = -1, so the least nonresidue has to be
// charged or the pointwise bound already fails at n = n(q).
MertensReport mertens_inequality_check(const DirichletCharacter& chi,
                                       uint64_t x, const SieveTables& sv);

}  // namespace nrlab
