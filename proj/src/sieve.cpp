#include "nrlab/sieve.hpp"

#include <cmath>

namespace nrlab {

SieveTables::SieveTables(uint64_t limit) : limit_(limit) {
  if (limit < 2) fail(errc::invalid_limit, "sieve limit must be at least 2");
  if (limit > kMaxLimit)
    fail(errc::limit_exceeded, "sieve limit above hard cap 1e8");

  spf_.assign(limit + 1, 0);
  mu_.assign(limit + 1, 0);
  phi_.assign(limit + 1, 0);
  lam_.assign(limit + 1, 0.0);
  spf_[1] = 1;
  mu_[1] = 1;
  phi_[1] = 1;

  // Linear sieve: each composite is struck exactly once, by its smallest
  // prime factor, which lets mu and phi extend multiplicatively on the fly.
  for (uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<uint32_t>(i);
      mu_[i] = -1;
      phi_[i] = static_cast<uint32_t>(i - 1);
      primes_.push_back(static_cast<uint32_t>(i));
    }
    for (uint32_t p : primes_) {
      if (p > spf_[i] || i * p > limit) break;
      spf_[i * p] = p;
      if (p == spf_[i]) {
        phi_[i * p] = static_cast<uint32_t>(phi_[i] * uint64_t{p});
        mu_[i * p] = 0;
        break;
      }
      phi_[i * p] = static_cast<uint32_t>(phi_[i] * uint64_t{p - 1});
      mu_[i * p] = static_cast<int8_t>(-mu_[i]);
    }
  }

  for (uint32_t p : primes_) {
    double lp = std::log(static_cast<double>(p));
    for (uint64_t q = p; q <= limit; q *= p) {
      lam_[q] = lp;
      if (q > limit / p) break;
    }
  }
}

std::vector<std::pair<uint32_t, uint32_t>> SieveTables::factor(
    uint64_t n) const {
  if (n > limit_) fail(errc::limit_exceeded, "factor query above sieve limit");
  std::vector<std::pair<uint32_t, uint32_t>> out;
  while (n > 1) {
    uint32_t p = spf_[n];
    uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

unsigned SieveTables::omega(uint64_t n) const {
  if (n > limit_) fail(errc::limit_exceeded, "omega query above sieve limit");
  unsigned w = 0;
  while (n > 1) {
    uint32_t p = spf_[n];
    while (n % p == 0) n /= p;
    ++w;
  }
  return w;
}

SieveTables build_sieve(uint64_t limit) { return SieveTables(limit); }

}  // namespace nrlab
