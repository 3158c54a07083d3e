#include "nrlab/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace nrlab {
namespace {

constexpr uint64_t kDlogTableCap = 1'000'000;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t base, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void require_odd_prime(uint64_t p, const char* who) {
  if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
    fail(errc::invalid_prime, std::string(who) + " needs an odd prime");
}

}  // namespace

int jacobi(int64_t n, uint64_t q) {
  if (q % 2 == 0 || q < 3)
    fail(errc::invalid_modulus, "Jacobi symbol needs odd modulus >= 3");
  uint64_t b = q;
  uint64_t a = static_cast<uint64_t>(((n % static_cast<int64_t>(q)) +
                                      static_cast<int64_t>(q)) %
                                     static_cast<int64_t>(q));
  int t = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      uint64_t r = b % 8;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, b);
    if (a % 4 == 3 && b % 4 == 3) t = -t;
    a %= b;
  }
  return b == 1 ? t : 0;
}

// ---- DirichletCharacter ----------------------------------------------------

DirichletCharacter DirichletCharacter::quadratic(uint64_t q) {
  if (q % 2 == 0 || q < 3)
    fail(errc::invalid_modulus, "quadratic character needs odd modulus >= 3");
  DirichletCharacter chi;
  chi.kind_ = Kind::quadratic;
  chi.q_ = q;
  // The Jacobi symbol mod a perfect square is 1 on everything coprime to q.
  uint64_t r = static_cast<uint64_t>(std::llround(std::sqrt(double(q))));
  chi.principal_ = (r * r == q) || ((r + 1) * (r + 1) == q);
  chi.d_ = chi.principal_ ? 1 : 2;
  return chi;
}

DirichletCharacter DirichletCharacter::prime_general(uint64_t p, uint64_t d,
                                                     const SieveTables& sv) {
  require_odd_prime(p, "prime_general character");
  if (d == 0 || (p - 1) % d != 0)
    fail(errc::out_of_range, "character order must divide p-1");
  DirichletCharacter chi;
  chi.kind_ = Kind::prime_general;
  chi.q_ = p;
  chi.d_ = d;
  chi.principal_ = (d == 1);
  chi.g_ = least_primitive_root(p, sv);

  if (p < kDlogTableCap) {
    auto table = std::make_shared<std::vector<uint32_t>>(p, 0);
    uint64_t pw = 1;
    for (uint64_t t = 0; t + 1 < p; ++t) {
      (*table)[pw] = static_cast<uint32_t>(t);
      pw = mulmod(pw, chi.g_, p);
    }
    chi.dlog_table_ = std::move(table);
  } else {
    // Baby-step giant-step: store g^j for j < m sorted by value, stride by
    // g^{-m} at query time.
    uint64_t m = static_cast<uint64_t>(std::ceil(std::sqrt(double(p - 1))));
    auto baby = std::make_shared<std::vector<std::pair<uint64_t, uint32_t>>>();
    baby->reserve(m);
    uint64_t pw = 1;
    for (uint64_t j = 0; j < m; ++j) {
      baby->emplace_back(pw, static_cast<uint32_t>(j));
      pw = mulmod(pw, chi.g_, p);
    }
    std::sort(baby->begin(), baby->end());
    chi.baby_ = std::move(baby);
    chi.bsgs_m_ = m;
    chi.giant_ = powmod(chi.g_, p - 1 - (m % (p - 1)), p);
  }
  return chi;
}

uint64_t DirichletCharacter::generator() const {
  if (kind_ != Kind::prime_general)
    fail(errc::wrong_kind, "quadratic characters carry no generator");
  return g_;
}

uint64_t DirichletCharacter::dlog(uint64_t n) const {
  if (kind_ != Kind::prime_general)
    fail(errc::wrong_kind, "discrete log needs a prime-modulus character");
  n %= q_;
  if (n == 0) fail(errc::out_of_range, "discrete log of 0");
  if (dlog_table_) return (*dlog_table_)[n];
  uint64_t y = n;
  for (uint64_t i = 0; i <= bsgs_m_; ++i) {
    auto it = std::lower_bound(baby_->begin(), baby_->end(),
                               std::make_pair(y, uint32_t{0}));
    if (it != baby_->end() && it->first == y)
      return (i * bsgs_m_ + it->second) % (q_ - 1);
    y = mulmod(y, giant_, q_);
  }
  fail(errc::no_such_element, "BSGS found no discrete log (modulus not prime?)");
}

uint64_t DirichletCharacter::exponent(int64_t n) const {
  uint64_t r = static_cast<uint64_t>(((n % static_cast<int64_t>(q_)) +
                                      static_cast<int64_t>(q_)) %
                                     static_cast<int64_t>(q_));
  if (kind_ == Kind::quadratic) {
    int j = jacobi(static_cast<int64_t>(r), q_);
    if (j == 0) return kNoExponent;
    if (principal_) return 0;
    return j == 1 ? 0 : 1;
  }
  if (r == 0) return kNoExponent;
  return dlog(r) % d_;
}

std::complex<double> DirichletCharacter::value(int64_t n) const {
  uint64_t e = exponent(n);
  if (e == kNoExponent) return {0.0, 0.0};
  if (d_ <= 2) return {e == 0 ? 1.0 : -1.0, 0.0};
  double arg = 2.0 * std::numbers::pi * double(e) / double(d_);
  return {std::cos(arg), std::sin(arg)};
}

int DirichletCharacter::ivalue(int64_t n) const {
  if (!real_valued())
    fail(errc::wrong_kind, "integer value of a non-real character");
  uint64_t e = exponent(n);
  if (e == kNoExponent) return 0;
  return e == 0 ? 1 : -1;
}

// ---- least nonresidue / least non-one / primitive roots --------------------

uint64_t least_nonresidue(uint64_t p) {
  require_odd_prime(p, "least_nonresidue");
  for (uint64_t n = 2; n < p; ++n)
    if (jacobi(static_cast<int64_t>(n), p) == -1) return n;
  fail(errc::no_such_element, "no nonresidue below p (impossible for p >= 3)");
}

uint64_t least_nonone(const DirichletCharacter& chi) {
  if (chi.principal())
    fail(errc::no_such_element, "principal character is identically 1");
  for (uint64_t n = 2; n <= chi.modulus() + 1; ++n) {
    uint64_t e = chi.exponent(static_cast<int64_t>(n));
    if (e != 0) return n;  // covers e = kNoExponent (chi(n) = 0) too
  }
  fail(errc::no_such_element, "character is 1 on a full period");
}

uint64_t least_primitive_root(uint64_t p, const SieveTables& sv) {
  require_odd_prime(p, "least_primitive_root");
  if (p > sv.limit())
    fail(errc::limit_exceeded, "primitive root search needs p <= sieve limit");
  auto fac = sv.factor(p - 1);
  for (uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto [r, e] : fac) {
      if (powmod(g, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  fail(errc::no_such_element, "no generator found (modulus not prime?)");
}

// ---- character sums ---------------------------------------------------------

namespace {

// Exponent-class counts of chi over lo..hi (span at most one period).
void count_exponents(const DirichletCharacter& chi, uint64_t lo, uint64_t hi,
                     std::vector<uint64_t>& counts) {
  for (uint64_t n = lo; n <= hi; ++n) {
    uint64_t e = chi.exponent(static_cast<int64_t>(n));
    if (e != DirichletCharacter::kNoExponent) ++counts[e];
  }
}

std::complex<double> counts_to_sum(const std::vector<uint64_t>& counts,
                                   uint64_t d) {
  // sum_k counts[k] zeta^k with the common part subtracted first: the full
  // set of d-th roots adds to zero, so equal counts cancel exactly instead
  // of leaving 1e-16 residue.
  uint64_t base = *std::min_element(counts.begin(), counts.end());
  if (d == 1) return {double(counts[0]), 0.0};
  if (d == 2) return {double(counts[0]) - double(counts[1]), 0.0};
  std::complex<double> s{0.0, 0.0};
  for (uint64_t k = 0; k < d; ++k) {
    uint64_t c = counts[k] - base;
    if (c == 0) continue;
    double arg = 2.0 * std::numbers::pi * double(k) / double(d);
    s += double(c) * std::complex<double>{std::cos(arg), std::sin(arg)};
  }
  return s;
}

}  // namespace

std::complex<double> char_sum(const DirichletCharacter& chi, uint64_t lo,
                              uint64_t hi) {
  if (lo < 1 || hi < lo) fail(errc::out_of_range, "char_sum needs 1 <= lo <= hi");
  uint64_t q = chi.modulus(), d = chi.order();
  std::vector<uint64_t> counts(d, 0);
  uint64_t span = hi - lo + 1;
  if (span >= q) {
    std::vector<uint64_t> period(d, 0);
    count_exponents(chi, 1, q, period);
    uint64_t full = span / q;
    for (uint64_t k = 0; k < d; ++k) counts[k] = full * period[k];
    uint64_t rest_lo = lo + full * q;
    if (rest_lo <= hi) count_exponents(chi, rest_lo, hi, counts);
  } else {
    count_exponents(chi, lo, hi, counts);
  }
  return counts_to_sum(counts, d);
}

CharSumProfile::CharSumProfile(const DirichletCharacter& chi, uint64_t T)
    : q_(chi.modulus()), tmax_(T) {
  prefix_.resize(T + 1);
  prefix_[0] = {0.0, 0.0};
  std::complex<double> s{0.0, 0.0};
  for (uint64_t n = 1; n <= T; ++n) {
    s += chi.value(static_cast<int64_t>(n));
    prefix_[n] = s;
  }
}

std::complex<double> CharSumProfile::prefix(uint64_t t) const {
  if (t > tmax_) fail(errc::limit_exceeded, "prefix query beyond profile");
  return prefix_[t];
}

DyadicBlock dyadic_max_block(const CharSumProfile& profile, uint64_t X) {
  if (X < 2) fail(errc::out_of_range, "dyadic_max_block needs X >= 2");
  if (X - 1 > profile.tmax())
    fail(errc::limit_exceeded, "dyadic_max_block needs X-1 <= profile range");
  DyadicBlock best;
  size_t blocks = 0;
  for (uint64_t N = X; N >= 1; N /= 2) {
    uint64_t lo = N / 2 + 1;
    uint64_t hi = std::min(N, X - 1);
    ++blocks;
    std::complex<double> s{0.0, 0.0};
    if (lo <= hi) s = profile.prefix(hi) - profile.prefix(lo - 1);
    double mag = std::abs(s);
    if (blocks == 1 || mag > best.magnitude) {
      best.n = N;
      best.lo = lo;
      best.hi = hi;
      best.sum = s;
      best.magnitude = mag;
    }
    if (N == 1) break;
  }
  best.block_count = blocks;
  return best;
}

double vinogradov_exponent(double varpi) {
  if (!(varpi >= 0.0 && varpi <= 0.25))
    fail(errc::out_of_range, "vinogradov_exponent needs 0 <= varpi <= 1/4");
  return std::exp(-0.5) * (0.5 - 2.0 * varpi);
}

MertensReport mertens_inequality_check(const DirichletCharacter& chi,
                                       uint64_t x, const SieveTables& sv) {
  if (chi.kind() != DirichletCharacter::Kind::quadratic)
    fail(errc::wrong_kind, "Mertens check is for quadratic characters");
  uint64_t q = chi.modulus();
  require_odd_prime(q, "mertens_inequality_check");
  if (x > sv.limit())
    fail(errc::limit_exceeded, "Mertens check needs x <= sieve limit");

  MertensReport rep;
  rep.q = q;
  rep.x = x;
  rep.nq = least_nonresidue(q);

  int64_t lhs = 0;
  for (uint64_t n = 1; n <= x; ++n) {
    int v = chi.ivalue(static_cast<int64_t>(n));
    if (n < x) lhs += v;
    if (std::gcd(n, q) != 1) continue;
    ++rep.checked;
    unsigned late = 0;  // distinct prime factors that can carry chi(p) != 1
    for (auto [p, e] : sv.factor(n))
      if (p >= rep.nq) ++late;
    if (v < 1 - 2 * static_cast<int>(late)) ++rep.violations;
  }
  rep.lhs = static_cast<double>(lhs);

  double tail = 0.0;
  for (uint32_t p : sv.primes()) {
    if (p > x) break;
    if (p >= rep.nq) tail += double(x) / double(p) + 1.0;
  }
  rep.rhs = double(x) - 1.0 - 2.0 * tail;
  rep.holds = rep.lhs >= rep.rhs - 1e-9;
  return rep;
}

}  // namespace nrlab
