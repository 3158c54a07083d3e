#pragma once

#include <cstdint>
#include <vector>

#include "nrlab/errors.hpp"
#include "nrlab/sieve.hpp"

namespace nrlab {

// Finitely supported arithmetic function on [lo, hi] with 1 <= lo <= hi.
// Reads outside the window return 0. A sequence is either exact (int64
// entries; convolutions and sums stay in integer arithmetic) or real
// (doubles). Mixing the two in a convolution is a caller bug: the exact
// identity suite depends on never silently promoting to floating point.
class ArithSeq {
 public:
  enum class Mode { exact, real };

  ArithSeq(Mode mode, int64_t lo, int64_t hi);

  static ArithSeq ones(int64_t lo, int64_t hi);  // exact indicator of [lo,hi]
  static ArithSeq unit();                        // exact indicator of {1}

  Mode mode() const { return mode_; }
  bool exact() const { return mode_ == Mode::exact; }
  int64_t lo() const { return lo_; }
  int64_t hi() const { return hi_; }
  int64_t span() const { return hi_ - lo_ + 1; }

  int64_t iat(int64_t n) const;  // exact mode only
  double at(int64_t n) const;    // either mode
  void iset(int64_t n, int64_t v);
  void iadd(int64_t n, int64_t v);
  void rset(int64_t n, double v);
  void radd(int64_t n, double v);

  int64_t isum() const;
  double sum() const;  // compensated in real mode

 private:
  void check_index(int64_t n) const;

  Mode mode_;
  int64_t lo_, hi_;
  std::vector<int64_t> iv_;
  std::vector<double> rv_;
};

// (f*g)(n) = sum_{d|n} f(d) g(n/d) over the full product support
// [f.lo*g.lo, f.hi*g.hi], by the direct double loop over (d, m) pairs.
// Exact inputs give an exact output (integer overflow is detected, not
// wrapped). ModeMismatch when one side is exact and the other real.
ArithSeq dirichlet_convolve(const ArithSeq& f, const ArithSeq& g);

// Number of ordered k-tuples with product n. Multiplicative:
// tau_k(p^e) = C(e+k-1, k-1). Plain trial division; use tau_k_table for
// sweeps. InvalidArity when k = 0.
uint64_t tau_k(uint32_t k, uint64_t n);

// tau_k(n) for all n <= x via the sieve's factorizations; index 0 unused.
std::vector<uint64_t> tau_k_table(uint32_t k, uint64_t x,
                                  const SieveTables& sv);

// True iff no prime p <= z divides n (vacuously true for n = 1).
bool is_rough(uint64_t n, double z);

// mu on [1, limit] as an exact sequence (handy for inversion tests).
ArithSeq mobius_seq(uint64_t limit, const SieveTables& sv);

}  // namespace nrlab
