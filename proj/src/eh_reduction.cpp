#include "nrlab/eh_reduction.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace nrlab {
namespace {

// f(p^e) for a real character: chi(p)^{e-1} (chi(p) - 1).
int64_t f_prime_power(int chip, uint32_t e) {
  if (chip == 1) return 0;
  if (chip == 0) return e == 1 ? -1 : 0;
  return (e % 2 == 1) ? -2 : 2;  // chi(p) = -1
}

}  // namespace

ChiMobiusExpansion expand_chi(const DirichletCharacter& chi, uint64_t limit,
                              const SieveTables& sv) {
  if (!chi.real_valued())
    fail(errc::wrong_kind, "expansion needs a real-valued character");
  if (limit < 1 || limit > sv.limit())
    fail(errc::limit_exceeded, "expansion limit beyond the sieve");
  const uint64_t y = least_nonone(chi);  // NoSuchElement for principal chi

  ArithSeq f(ArithSeq::Mode::exact, 1, static_cast<int64_t>(limit));
  f.iset(1, 1);
  for (uint64_t n = 2; n <= limit; ++n) {
    uint64_t m = n;
    uint32_t p = sv.spf(n), e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    int64_t head = f_prime_power(chi.ivalue(p), e);
    f.iset(static_cast<int64_t>(n),
           head == 0 ? 0 : head * f.iat(static_cast<int64_t>(m)));
  }

  ArithSeq ft = f;
  ft.iadd(1, -1);

  // Constructive checks of the defining identities.
  for (uint64_t n = 1; n < y && n <= limit; ++n)
    if (ft.iat(static_cast<int64_t>(n)) != 0)
      fail(errc::identity_violation, "f_tilde does not vanish below y");
  // (1 * f)(n) = chi(n) on [1, limit], via the divisor-sum sieve.
  {
    std::vector<int64_t> conv(limit + 1, 0);
    for (uint64_t d = 1; d <= limit; ++d) {
      int64_t fd = f.iat(static_cast<int64_t>(d));
      if (fd == 0) continue;
      for (uint64_t n = d; n <= limit; n += d) conv[n] += fd;
    }
    for (uint64_t n = 1; n <= limit; ++n)
      if (conv[n] != chi.ivalue(static_cast<int64_t>(n)))
        fail(errc::identity_violation,
             "1 * f fails to reproduce chi at n = " + std::to_string(n));
  }

  return ChiMobiusExpansion{chi, limit, y, std::move(f), std::move(ft)};
}

namespace {

struct Windows {
  uint64_t w1_hi;        // w1 = [1, w1_hi]
  uint64_t w2_lo, w2_hi; // w2 = [w2_lo, w2_hi]; empty when w2_lo > w2_hi
};

Windows co_divisor_windows(uint64_t x, double nu, uint64_t y) {
  double xnu = std::pow(static_cast<double>(x), nu);
  uint64_t split = static_cast<uint64_t>(std::ceil(xnu - 1e-9));  // d < x^nu
  Windows w;
  w.w1_hi = split - 1;
  w.w2_lo = split;
  w.w2_hi = x / y;
  return w;
}

// sum over divisors d of n with lo <= d <= hi of f_tilde(n/d).
int64_t windowed_divisor_sum(const ArithSeq& ft, uint64_t n, uint64_t lo,
                             uint64_t hi, const SieveTables& sv) {
  if (lo > hi) return 0;
  int64_t s = 0;
  // enumerate divisors from the factorization
  auto fac = sv.factor(n);
  std::vector<uint64_t> divs{1};
  for (auto [p, e] : fac) {
    size_t old = divs.size();
    uint64_t pe = 1;
    for (uint32_t j = 1; j <= e; ++j) {
      pe *= p;
      for (size_t i = 0; i < old; ++i) divs.push_back(divs[i] * pe);
    }
  }
  for (uint64_t d : divs)
    if (d >= lo && d <= hi) s += ft.iat(static_cast<int64_t>(n / d));
  return s;
}

}  // namespace

IdentityFooReport verify_identity_foo(const ChiMobiusExpansion& exp,
                                      uint64_t x, double nu,
                                      const SieveTables& sv) {
  if (x < 2 || x > exp.limit)
    fail(errc::out_of_range, "identity range needs 2 <= x <= expansion limit");
  Windows w = co_divisor_windows(x, nu, exp.y);

  IdentityFooReport rep;
  rep.x = x;
  rep.nu = nu;
  rep.w1_hi = w.w1_hi;
  rep.w2_lo = w.w2_lo;
  rep.w2_hi = w.w2_hi;

  for (uint64_t n = (x + 1) / 2; n <= x; ++n) {
    int64_t lhs = exp.chi.ivalue(static_cast<int64_t>(n));
    int64_t rhs = 1 + windowed_divisor_sum(exp.f_tilde, n, 1, w.w1_hi, sv) +
                  windowed_divisor_sum(exp.f_tilde, n, w.w2_lo, w.w2_hi, sv);
    ++rep.checked;
    if (lhs != rhs) {
      ++rep.violations;
      fail(errc::identity_violation,
           "windowed divisor identity fails at n = " + std::to_string(n));
    }
  }
  return rep;
}

SplitXReport split_X(const DirichletCharacter& chi, uint64_t q, uint64_t x,
                     double nu, const SieveTables& sv) {
  if (q != chi.modulus())
    fail(errc::out_of_range, "q must be the modulus of chi");
  if (x < 2 * q) fail(errc::shift_too_large, "need x >= 2q");
  if (x + q > sv.limit())
    fail(errc::limit_exceeded, "need x + q within the sieve");

  ChiMobiusExpansion exp = expand_chi(chi, x, sv);
  Windows w = co_divisor_windows(x, nu, exp.y);

  SplitXReport rep;
  rep.q = q;
  rep.x = x;
  rep.nu = nu;
  for (uint64_t n = (x + 1) / 2; n <= x; ++n) {
    double weight = sv.mangoldt(n + q) - 1.0;
    int64_t c = chi.ivalue(static_cast<int64_t>(n));
    int64_t s2 = windowed_divisor_sum(exp.f_tilde, n, 1, w.w1_hi, sv);
    int64_t s3 = windowed_divisor_sum(exp.f_tilde, n, w.w2_lo, w.w2_hi, sv);
    rep.X += static_cast<double>(c) * weight;
    rep.X1 += weight;
    rep.X2 += static_cast<double>(s2) * weight;
    rep.X3 += static_cast<double>(s3) * weight;
    double resid = std::abs(static_cast<double>(c - 1 - s2 - s3));
    if (resid > rep.max_pointwise_residual) rep.max_pointwise_residual = resid;
  }
  return rep;
}

std::string to_kv_text(const SplitXReport& rep) {
  std::ostringstream os;
  os.precision(17);
  os << "q\t" << rep.q << "\n"
     << "x\t" << rep.x << "\n"
     << "nu\t" << rep.nu << "\n"
     << "X\t" << rep.X << "\n"
     << "X1\t" << rep.X1 << "\n"
     << "X2\t" << rep.X2 << "\n"
     << "X3\t" << rep.X3 << "\n"
     << "max_pointwise_residual\t" << rep.max_pointwise_residual << "\n";
  return os.str();
}

}  // namespace nrlab
