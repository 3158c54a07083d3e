#pragma once

#include <cstdint>
#include <string>

#include "nrlab/arith_seq.hpp"
#include "nrlab/characters.hpp"
#include "nrlab/errors.hpp"
#include "nrlab/sieve.hpp"

namespace nrlab {

// chi = 1 * f by Moebius inversion, i.e. f = chi * mu. f is multiplicative
// with f(p^j) = chi(p)^{j-1} (chi(p) - 1); for a real character the values
// are the integers {0, -1, +2, -2}. f_tilde = f minus the indicator of {1}
// vanishes on [1, y) where y is the least n with chi(n) != 1, which is what
// makes the windowed divisor identities below exact.
struct ChiMobiusExpansion {
  DirichletCharacter chi;
  uint64_t limit = 0;
  uint64_t y = 0;     // least_nonone(chi)
  ArithSeq f;         // exact mode, support [1, limit]
  ArithSeq f_tilde;   // f - delta_1
};

// Build the expansion and verify its defining identities up to `limit`:
// the prime-power formula, the vanishing of f_tilde below y, and
// (1 * f)(n) = chi(n) for every n <= limit. Restricted to real-valued chi
// (WrongKind otherwise); principal chi has no y (NoSuchElement).
ChiMobiusExpansion expand_chi(const DirichletCharacter& chi, uint64_t limit,
                              const SieveTables& sv);

struct IdentityFooReport {
  uint64_t x = 0;
  double nu = 0.0;
  uint64_t w1_lo = 1, w1_hi = 0;  // co-divisor window [1, ceil(x^nu) - 1]
  uint64_t w2_lo = 0, w2_hi = 0;  // co-divisor window [ceil(x^nu), floor(x/y)]
  uint64_t checked = 0;
  uint64_t violations = 0;
  double max_residual = 0.0;
};

// Exhaustively verify, for every n in [x/2, x]:
//
//   chi(n) = 1 + sum_{d|n, d in w1} f_tilde(n/d) + sum_{d|n, d in w2} f_tilde(n/d)
//
// The windows w1 = [1, x^nu) and w2 = [x^nu, x/y] tile the co-divisors d up
// to x/y; any larger d forces n/d < y where f_tilde vanishes, so the
// truncation loses nothing and the identity is exact in integers. The first
// mismatch (smallest n) throws IdentityViolation naming the witness.
IdentityFooReport verify_identity_foo(const ChiMobiusExpansion& exp,
                                      uint64_t x, double nu,
                                      const SieveTables& sv);

struct SplitXReport {
  uint64_t q = 0, x = 0;
  double nu = 0.0;
  double X = 0.0;    // sum over n in [x/2, x] of chi(n) (Lambda(n+q) - 1)
  double X1 = 0.0;   // the "1" term of the divisor identity
  double X2 = 0.0;   // short co-divisor window w1
  double X3 = 0.0;   // long co-divisor window w2
  double max_pointwise_residual = 0.0;  // identity residual over the range
};

// Split X = X1 + X2 + X3 along the windowed divisor identity. Requires
// x >= 2q (ShiftTooLarge below) and x + q within the sieve.
SplitXReport split_X(const DirichletCharacter& chi, uint64_t q, uint64_t x,
                     double nu, const SieveTables& sv);

// Key-value text form: one "name<TAB>value" line per field.
std::string to_kv_text(const SplitXReport& rep);

}  // namespace nrlab
