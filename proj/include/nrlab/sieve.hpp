#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nrlab/errors.hpp"

namespace nrlab {

// Flat factorization tables on [0, limit], built once and read everywhere.
// Storage is ~17 bytes per integer (u32 spf + i8 mu + u32 phi + f64 Lambda),
// so the hard cap of 1e8 costs ~1.7 GB; size the limit to the sweep.
class SieveTables {
 public:
  static constexpr uint64_t kMaxLimit = 100'000'000;

  explicit SieveTables(uint64_t limit);

  uint64_t limit() const { return limit_; }
  uint32_t spf(uint64_t n) const { return spf_[n]; }  // spf(1) = 1
  int mobius(uint64_t n) const { return mu_[n]; }
  uint64_t totient(uint64_t n) const { return phi_[n]; }
  double mangoldt(uint64_t n) const { return lam_[n]; }
  bool is_prime(uint64_t n) const { return n >= 2 && spf_[n] == n; }

  // All primes <= limit, ascending.
  const std::vector<uint32_t>& primes() const { return primes_; }

  // (prime, exponent) pairs of n <= limit, ascending primes; empty for n = 1.
  std::vector<std::pair<uint32_t, uint32_t>> factor(uint64_t n) const;

  // Number of distinct prime factors.
  unsigned omega(uint64_t n) const;

 private:
  uint64_t limit_;
  std::vector<uint32_t> spf_;
  std::vector<int8_t> mu_;
  std::vector<uint32_t> phi_;
  std::vector<double> lam_;
  std::vector<uint32_t> primes_;
};

// InvalidLimit if limit < 2, LimitExceeded beyond the documented cap.
SieveTables build_sieve(uint64_t limit);

}  // namespace nrlab
