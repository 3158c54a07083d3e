#include "nrlab/arith_seq.hpp"

#include <cmath>
#include <string>

namespace nrlab {
namespace {

// Allocation guard for sequence windows and convolution outputs.
constexpr int64_t kSpanCap = 200'000'000;

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    fail(errc::overflow, "int64 overflow in exact-mode accumulation");
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    fail(errc::overflow, "int64 overflow in exact-mode product");
  return r;
}

// C(n, r) in exact integer arithmetic; the running product is divisible by i
// at every step, so the division is exact.
uint64_t binom_checked(uint64_t n, uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  uint64_t c = 1;
  for (uint64_t i = 1; i <= r; ++i) {
    unsigned __int128 t = static_cast<unsigned __int128>(c) * (n - r + i);
    t /= i;
    if (t > ~0ull) fail(errc::overflow, "binomial exceeds 64 bits");
    c = static_cast<uint64_t>(t);
  }
  return c;
}

}  // namespace

ArithSeq::ArithSeq(Mode mode, int64_t lo, int64_t hi)
    : mode_(mode), lo_(lo), hi_(hi) {
  if (lo < 1 || hi < lo)
    fail(errc::out_of_range, "sequence support must satisfy 1 <= lo <= hi");
  if (span() > kSpanCap)
    fail(errc::limit_exceeded, "sequence window above allocation cap");
  if (mode_ == Mode::exact)
    iv_.assign(static_cast<size_t>(span()), 0);
  else
    rv_.assign(static_cast<size_t>(span()), 0.0);
}

ArithSeq ArithSeq::ones(int64_t lo, int64_t hi) {
  ArithSeq s(Mode::exact, lo, hi);
  for (auto& v : s.iv_) v = 1;
  return s;
}

ArithSeq ArithSeq::unit() { return ones(1, 1); }

void ArithSeq::check_index(int64_t n) const {
  if (n < lo_ || n > hi_)
    fail(errc::out_of_range, "write outside sequence support");
}

int64_t ArithSeq::iat(int64_t n) const {
  if (mode_ != Mode::exact)
    fail(errc::mode_mismatch, "integer read from real-mode sequence");
  if (n < lo_ || n > hi_) return 0;
  return iv_[static_cast<size_t>(n - lo_)];
}

double ArithSeq::at(int64_t n) const {
  if (n < lo_ || n > hi_) return 0.0;
  size_t i = static_cast<size_t>(n - lo_);
  return mode_ == Mode::exact ? static_cast<double>(iv_[i]) : rv_[i];
}

void ArithSeq::iset(int64_t n, int64_t v) {
  if (mode_ != Mode::exact)
    fail(errc::mode_mismatch, "integer write to real-mode sequence");
  check_index(n);
  iv_[static_cast<size_t>(n - lo_)] = v;
}

void ArithSeq::iadd(int64_t n, int64_t v) {
  if (mode_ != Mode::exact)
    fail(errc::mode_mismatch, "integer write to real-mode sequence");
  check_index(n);
  auto& slot = iv_[static_cast<size_t>(n - lo_)];
  slot = checked_add(slot, v);
}

void ArithSeq::rset(int64_t n, double v) {
  if (mode_ != Mode::real)
    fail(errc::mode_mismatch, "real write to exact-mode sequence");
  check_index(n);
  rv_[static_cast<size_t>(n - lo_)] = v;
}

void ArithSeq::radd(int64_t n, double v) {
  if (mode_ != Mode::real)
    fail(errc::mode_mismatch, "real write to exact-mode sequence");
  check_index(n);
  rv_[static_cast<size_t>(n - lo_)] += v;
}

int64_t ArithSeq::isum() const {
  if (mode_ != Mode::exact)
    fail(errc::mode_mismatch, "integer sum of real-mode sequence");
  int64_t s = 0;
  for (int64_t v : iv_) s = checked_add(s, v);
  return s;
}

double ArithSeq::sum() const {
  if (mode_ == Mode::exact) return static_cast<double>(isum());
  // Kahan compensation: the sweeps feed long alternating-sign sums where
  // naive accumulation visibly drifts.
  double s = 0.0, c = 0.0;
  for (double v : rv_) {
    double y = v - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

ArithSeq dirichlet_convolve(const ArithSeq& f, const ArithSeq& g) {
  if (f.mode() != g.mode())
    fail(errc::mode_mismatch, "convolution of exact with real sequence");
  int64_t lo = checked_mul(f.lo(), g.lo());
  int64_t hi = checked_mul(f.hi(), g.hi());
  ArithSeq out(f.mode(), lo, hi);
  if (f.exact()) {
    for (int64_t d = f.lo(); d <= f.hi(); ++d) {
      int64_t fd = f.iat(d);
      if (fd == 0) continue;
      for (int64_t m = g.lo(); m <= g.hi(); ++m) {
        int64_t gm = g.iat(m);
        if (gm == 0) continue;
        out.iadd(d * m, checked_mul(fd, gm));
      }
    }
  } else {
    for (int64_t d = f.lo(); d <= f.hi(); ++d) {
      double fd = f.at(d);
      if (fd == 0.0) continue;
      for (int64_t m = g.lo(); m <= g.hi(); ++m) {
        double gm = g.at(m);
        if (gm == 0.0) continue;
        out.radd(d * m, fd * gm);
      }
    }
  }
  return out;
}

uint64_t tau_k(uint32_t k, uint64_t n) {
  if (k == 0) fail(errc::invalid_arity, "tau_k needs k >= 1");
  if (n == 0) fail(errc::out_of_range, "tau_k needs n >= 1");
  uint64_t v = 1;
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    unsigned __int128 t =
        static_cast<unsigned __int128>(v) * binom_checked(e + k - 1, k - 1);
    if (t > ~0ull) fail(errc::overflow, "tau_k exceeds 64 bits");
    v = static_cast<uint64_t>(t);
  }
  if (n > 1) {
    // Single leftover prime factor: C(k, k-1) = k.
    unsigned __int128 t = static_cast<unsigned __int128>(v) * k;
    if (t > ~0ull) fail(errc::overflow, "tau_k exceeds 64 bits");
    v = static_cast<uint64_t>(t);
  }
  return v;
}

std::vector<uint64_t> tau_k_table(uint32_t k, uint64_t x,
                                  const SieveTables& sv) {
  if (k == 0) fail(errc::invalid_arity, "tau_k needs k >= 1");
  if (x > sv.limit()) fail(errc::limit_exceeded, "tau_k table above sieve");
  std::vector<uint64_t> t(x + 1, 0);
  if (x == 0) return t;
  t[0] = 0;
  for (uint64_t n = 1; n <= x; ++n) {
    uint64_t m = n, v = 1;
    while (m > 1) {
      uint32_t p = sv.spf(m);
      uint32_t e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      unsigned __int128 prod =
          static_cast<unsigned __int128>(v) * binom_checked(e + k - 1, k - 1);
      if (prod > ~0ull) fail(errc::overflow, "tau_k exceeds 64 bits");
      v = static_cast<uint64_t>(prod);
    }
    t[n] = v;
  }
  return t;
}

bool is_rough(uint64_t n, double z) {
  if (n == 0) fail(errc::out_of_range, "is_rough needs n >= 1");
  if (n == 1 || z < 2.0) return true;
  uint64_t zi = static_cast<uint64_t>(std::floor(z));
  for (uint64_t d = 2; d <= zi && d * d <= n; ++d)
    if (n % d == 0) return false;  // first divisor found is prime
  // No divisor up to min(z, sqrt(n)): n is prime or has all factors > sqrt(n).
  return !(n > 1 && n <= zi);
}

ArithSeq mobius_seq(uint64_t limit, const SieveTables& sv) {
  if (limit > sv.limit()) fail(errc::limit_exceeded, "mu table above sieve");
  ArithSeq s(ArithSeq::Mode::exact, 1, static_cast<int64_t>(limit));
  for (uint64_t n = 1; n <= limit; ++n) s.iset(n, sv.mobius(n));
  return s;
}

}  // namespace nrlab
