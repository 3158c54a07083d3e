#include "nrlab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nrlab/parallel.hpp"

namespace nrlab {
namespace {

uint64_t phi_u64(uint64_t n) {
  uint64_t result = n;
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

}  // namespace

bool ResidueClass::primitive() const {
  return a >= 1 && a <= r && std::gcd(a, r) == 1;
}

double discrepancy(const ArithSeq& seq, const ResidueClass& cls) {
  if (cls.a < 1 || cls.a > cls.r)
    fail(errc::out_of_range, "residue class needs 1 <= a <= r");
  if (!cls.primitive())
    fail(errc::not_primitive, "discrepancy needs gcd(a, r) = 1");
  const uint64_t r = cls.r;
  double in_class = 0.0, coprime = 0.0;
  for (int64_t n = seq.lo(); n <= seq.hi(); ++n) {
    double v = seq.at(n);
    if (v == 0.0) continue;
    uint64_t un = static_cast<uint64_t>(n);
    if (std::gcd(un, r) != 1) continue;
    coprime += v;
    if (un % r == cls.a % r) in_class += v;
  }
  return in_class - coprime / static_cast<double>(phi_u64(r));
}

double eh_statistic(uint64_t x, double theta, const SieveTables& sv) {
  if (x < 2 || x > sv.limit())
    fail(errc::limit_exceeded, "statistic needs 2 <= x <= sieve limit");
  if (!(theta > 0.0 && theta < 1.0))
    fail(errc::out_of_range, "level needs 0 < theta < 1");

  const uint64_t r_max = static_cast<uint64_t>(
      std::ceil(std::pow(static_cast<double>(x), theta) - 1e-9) - 1);
  double total = 0.0;
  std::vector<double> bucket;
  for (uint64_t r = 2; r <= r_max; ++r) {  // r = 1 contributes 0 exactly
    bucket.assign(r, 0.0);
    for (uint64_t n = 1; n <= x; ++n) {
      double lam = sv.mangoldt(n);
      if (lam != 0.0) bucket[n % r] += lam;
    }
    double coprime = 0.0;
    uint64_t phi = 0;
    for (uint64_t a = 1; a <= r; ++a)
      if (std::gcd(a, r) == 1) {
        coprime += bucket[a % r];
        ++phi;
      }
    const double mean = coprime / static_cast<double>(phi);
    double best = 0.0;
    for (uint64_t a = 1; a <= r; ++a)
      if (std::gcd(a, r) == 1)
        best = std::max(best, std::abs(bucket[a % r] - mean));
    total += best;
  }
  return total;
}

LevelSweepReport eh_sweep(uint64_t x, const std::vector<double>& thetas,
                          const SieveTables& sv, unsigned threads) {
  LevelSweepReport rep;
  rep.x = x;
  rep.thetas = thetas;
  rep.E.assign(thetas.size(), 0.0);
  rep.E_over_x.assign(thetas.size(), 0.0);
  parallel_for(thetas.size(), threads, [&](size_t i) {
    rep.E[i] = eh_statistic(x, thetas[i], sv);
    rep.E_over_x[i] = rep.E[i] / static_cast<double>(x);
  });
  return rep;
}

// ---- the dispersion experiment ----------------------------------------------

namespace {

std::vector<uint32_t> window_primes(uint64_t q, uint64_t x, double eps,
                                    double delta, const SieveTables& sv) {
  const double lo = std::pow(static_cast<double>(q), eps);
  const double hi = std::pow(static_cast<double>(x), delta);
  std::vector<uint32_t> ps;
  for (uint32_t p : sv.primes()) {
    double pd = static_cast<double>(p);
    if (pd < lo - 1e-9) continue;
    if (pd > hi + 1e-9) break;
    if (q % p != 0) ps.push_back(p);
  }
  return ps;
}

}  // namespace

TypeIIExperiment build_experiment(const DirichletCharacter& chi, uint64_t q,
                                  double A, double eps, double delta,
                                  double varpi, const SieveTables& sv) {
  if (q != chi.modulus())
    fail(errc::out_of_range, "q must be the modulus of chi");
  if (!chi.real_valued())
    fail(errc::wrong_kind, "experiment sequences are exact: chi must be real");
  if (!(varpi >= 0.0 && varpi < 0.25))
    fail(errc::out_of_range, "need 0 <= varpi < 1/4");

  const double half = 0.5 - 2.0 * varpi;
  const uint64_t N = static_cast<uint64_t>(
      std::llround(std::pow(static_cast<double>(q), half + eps)));
  if (N < 2) fail(errc::window_too_small, "N rounds below 2");
  const uint64_t x = static_cast<uint64_t>(
      std::pow(static_cast<double>(N), 1.0 / half) + 1e-9);
  if (x > sv.limit())
    fail(errc::limit_exceeded, "x exceeds the sieve limit");
  const uint64_t M = static_cast<uint64_t>(
      std::llround(static_cast<double>(x) / static_cast<double>(N)));

  // pinned-rounding invariants
  if (static_cast<uint64_t>(
          std::llround(std::pow(static_cast<double>(x), half))) != N)
    fail(errc::out_of_range, "rounding drift: N != round(x^{1/2-2varpi})");
  if (!(N * M <= 2 * x && x <= 2 * N * M))
    fail(errc::out_of_range, "rounding drift: N*M not within a factor 2 of x");

  const double w =
      std::pow(std::log(static_cast<double>(x)), -(10.0 * A + 10.0));
  uint64_t lo = 1;
  const double lo_f = (1.0 - w) * static_cast<double>(M);
  if (lo_f > 1.0) lo = static_cast<uint64_t>(std::ceil(lo_f - 1e-9));

  const auto ps = window_primes(q, x, eps, delta, sv);
  std::vector<uint64_t> D;
  for (uint64_t m = lo; m <= M; ++m) {
    if (std::gcd(m, q) != 1) continue;
    if (m != 1 && sv.mobius(m) == 0) continue;  // not squarefree
    bool smooth = true;
    for (auto [p, e] : sv.factor(m)) {
      if (!std::binary_search(ps.begin(), ps.end(), p)) {
        smooth = false;
        break;
      }
    }
    if (smooth) D.push_back(m);
  }
  if (D.empty())
    fail(errc::empty_window, "no qualifying integer in the smooth window");

  ArithSeq alpha(ArithSeq::Mode::exact, static_cast<int64_t>(lo),
                 static_cast<int64_t>(M));
  for (uint64_t m : D)
    alpha.iset(static_cast<int64_t>(m),
               chi.ivalue(static_cast<int64_t>(m)));
  ArithSeq beta = ArithSeq::ones(static_cast<int64_t>((N + 1) / 2),
                                 static_cast<int64_t>(N));

  return TypeIIExperiment{chi,  q, A, eps,       delta,
                          varpi, x, N, M,         1,
                          lo,    std::move(D), std::move(alpha),
                          std::move(beta)};
}

double typeii_statistic(const TypeIIExperiment& exp, uint64_t a,
                        const SieveTables& sv) {
  const auto ps = window_primes(exp.q, exp.x, exp.eps, exp.delta, sv);
  for (uint32_t p : ps)
    if (a % p == 0)
      fail(errc::not_coprime, "class must be coprime to the window primes");

  const uint64_t cap = static_cast<uint64_t>(
      std::pow(static_cast<double>(exp.x), 0.5 + 2.0 * exp.varpi) + 1e-9);
  ArithSeq conv = dirichlet_convolve(exp.alpha, exp.beta);

  double total = 0.0;  // r = 1 term is identically 0
  // depth-first over squarefree products of window primes, capped
  auto dfs = [&](auto&& self, size_t idx, uint64_t r) -> void {
    for (size_t i = idx; i < ps.size(); ++i) {
      if (r > cap / ps[i]) break;  // primes ascend: larger i only grows r
      uint64_t rr = r * ps[i];
      uint64_t cls = a % rr;
      total += std::abs(discrepancy(conv, ResidueClass{cls == 0 ? rr : cls, rr}));
      self(self, i + 1, rr);
    }
  };
  dfs(dfs, 0, 1);
  return total;
}

namespace {

// sum conv(n) conv(n - s) over the exact convolution's support
double shifted_self_product(const ArithSeq& conv, uint64_t s) {
  double acc = 0.0;
  for (int64_t n = conv.lo() + static_cast<int64_t>(s); n <= conv.hi(); ++n) {
    int64_t u = conv.iat(n);
    if (u == 0) continue;
    int64_t v = conv.iat(n - static_cast<int64_t>(s));
    if (v != 0) acc += static_cast<double>(u) * static_cast<double>(v);
  }
  return acc;
}

}  // namespace

DispersionReport dispersion_X(const TypeIIExperiment& exp) {
  DispersionReport rep;
  rep.j = exp.j;
  ArithSeq conv = dirichlet_convolve(exp.alpha, exp.beta);
  if (conv.isum() != exp.alpha.isum() * exp.beta.isum())
    fail(errc::identity_violation, "convolution sum failed to factor");
  rep.gamma = 2.0 * static_cast<double>(conv.isum()) /
              static_cast<double>(exp.x);
  rep.reference =
      rep.gamma * rep.gamma * static_cast<double>(exp.x) / 2.0;
  if (exp.j * exp.q > exp.x) {
    rep.disjoint_support = true;
    rep.X = 0.0;
    return rep;
  }
  rep.X = shifted_self_product(conv, exp.j * exp.q);
  return rep;
}

DispersionReport dispersion_max_shift(const TypeIIExperiment& exp) {
  const uint64_t j_max = static_cast<uint64_t>(
      std::pow(static_cast<double>(exp.q), exp.eps) + 1e-9);
  TypeIIExperiment probe = exp;
  DispersionReport best;
  bool first = true;
  for (uint64_t j = 1; j <= std::max<uint64_t>(j_max, 1); ++j) {
    probe.j = j;
    DispersionReport rep = dispersion_X(probe);
    if (first || std::abs(rep.X - rep.reference) >
                     std::abs(best.X - best.reference)) {
      best = rep;
      first = false;
    }
  }
  return best;
}

ChiCorrelationReport chi_correlation(const TypeIIExperiment& exp, uint64_t J) {
  if (J < 1) fail(errc::out_of_range, "need J >= 1");
  ChiCorrelationReport rep;
  rep.J = J;
  ArithSeq conv = dirichlet_convolve(exp.alpha, exp.beta);

  for (uint64_t j = 1; j <= J; ++j) {
    for (int64_t m = conv.lo(); m <= conv.hi(); ++m) {
      int64_t c = conv.iat(m);
      if (c == 0) continue;
      int64_t n = m - static_cast<int64_t>(j * exp.q);
      if (n < 1 || n > static_cast<int64_t>(exp.x)) continue;
      rep.raw += exp.chi.value(n) * static_cast<double>(c);
    }
  }

  std::complex<double> sa{0.0, 0.0}, sb{0.0, 0.0};
  for (int64_t m = exp.alpha.lo(); m <= exp.alpha.hi(); ++m) {
    int64_t v = exp.alpha.iat(m);
    if (v != 0) sa += exp.chi.value(m) * static_cast<double>(v);
  }
  for (int64_t n = exp.beta.lo(); n <= exp.beta.hi(); ++n) {
    int64_t v = exp.beta.iat(n);
    if (v != 0) sb += exp.chi.value(n) * static_cast<double>(v);
  }
  rep.factored = static_cast<double>(J) * sa * sb;

  rep.shift_leak =
      !(conv.lo() > static_cast<int64_t>(J * exp.q) &&
        conv.hi() <= static_cast<int64_t>(exp.x + exp.q));
  return rep;
}

uint64_t divisor_correlation(uint32_t k, uint64_t x, uint64_t h,
                             const SieveTables& sv) {
  if (k < 1) fail(errc::invalid_arity, "need k >= 1");
  if (x < 1 || x + h > sv.limit())
    fail(errc::limit_exceeded, "need x + h within the sieve");
  std::vector<uint64_t> tau = tau_k_table(k, x + h, sv);
  unsigned __int128 acc = 0;
  for (uint64_t n = 1; n <= x; ++n)
    acc += static_cast<unsigned __int128>(tau[n]) * tau[n + h];
  if (acc > static_cast<unsigned __int128>(~0ull))
    fail(errc::overflow, "correlation sum exceeds 64 bits");
  return static_cast<uint64_t>(acc);
}

// ---- psi_k -------------------------------------------------------------------

namespace {

const double kLog2 = std::log(2.0);

// Phi_k on nodes i * (log2/grid), i = 0..k*grid, for k >= 2. Phi_2 is the
// exact triangle; higher k integrates the previous profile over a log2
// window using the trapezoid antiderivative (the integrands are continuous
// from k = 2 on, so no jump correction is needed).
std::vector<double> phi_nodes(uint32_t k, uint32_t grid) {
  const double du = kLog2 / static_cast<double>(grid);
  std::vector<double> phi(2 * static_cast<size_t>(grid) + 1);
  for (size_t i = 0; i < phi.size(); ++i) {
    double u = du * static_cast<double>(i);
    phi[i] = std::min(u, 2.0 * kLog2 - u);
  }
  for (uint32_t j = 2; j < k; ++j) {
    const size_t old_n = phi.size();  // j*grid + 1 nodes
    std::vector<double> F(old_n, 0.0);
    for (size_t i = 1; i < old_n; ++i)
      F[i] = F[i - 1] + 0.5 * du * (phi[i - 1] + phi[i]);
    std::vector<double> next(old_n + grid);
    for (size_t i = 0; i < next.size(); ++i) {
      size_t hi = std::min(i, old_n - 1);
      size_t lo = i > grid ? std::min<size_t>(i - grid, old_n - 1) : 0;
      next[i] = F[hi] - F[lo];
    }
    phi = std::move(next);
  }
  return phi;
}

}  // namespace

double psi_k(uint32_t k, double t, uint32_t grid) {
  if (k < 1) fail(errc::invalid_arity, "need k >= 1");
  if (!(t > 0.0)) fail(errc::out_of_domain, "need t > 0");
  if (grid < 16) fail(errc::grid_too_coarse, "need at least 16 cells");
  if (k == 1) return (t >= 0.5 && t <= 1.0) ? 1.0 : 0.0;

  const double u = -std::log(t);
  const double top = static_cast<double>(k) * kLog2;
  if (u < 0.0 || u > top) return 0.0;
  if (k == 2) return std::min(u, 2.0 * kLog2 - u);

  const std::vector<double> phi = phi_nodes(k, grid);
  const double du = kLog2 / static_cast<double>(grid);
  double pos = u / du;
  size_t i = std::min(static_cast<size_t>(pos), phi.size() - 2);
  double frac = pos - static_cast<double>(i);
  return phi[i] + frac * (phi[i + 1] - phi[i]);
}

double psi_k_sq_integral(uint32_t k, uint32_t grid) {
  if (k < 1) fail(errc::invalid_arity, "need k >= 1");
  if (grid < 16) fail(errc::grid_too_coarse, "need at least 16 cells");
  if (k == 1) return 0.5;  // integral over [1/2, 1] of 1
  const std::vector<double> phi = phi_nodes(k, grid);
  const double du = kLog2 / static_cast<double>(grid);
  double acc = 0.0, prev = 0.0;  // phi(0)^2 e^0 = 0
  for (size_t i = 1; i < phi.size(); ++i) {
    double u = du * static_cast<double>(i);
    double cur = phi[i] * phi[i] * std::exp(-u);
    acc += 0.5 * du * (prev + cur);
    prev = cur;
  }
  return acc;
}

BetaKReport betak_experiment(const DirichletCharacter& chi, uint32_t k,
                             const std::vector<uint64_t>& Ns, double A,
                             uint32_t grid) {
  (void)A;  // interface parity with build_experiment; no window to narrow here
  if (k < 1 || Ns.size() != k)
    fail(errc::invalid_arity, "need k >= 1 interval lengths");
  for (size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 1) fail(errc::out_of_range, "need every N_i >= 1");
    if (i > 0 && Ns[i] > Ns[i - 1])
      fail(errc::out_of_range, "need N_1 >= N_2 >= ... >= N_k");
  }
  const uint64_t q = chi.modulus();

  unsigned __int128 xw = 1;
  for (uint64_t n : Ns) xw *= n;
  if (xw > static_cast<unsigned __int128>(int64_t(1) << 62))
    fail(errc::limit_exceeded, "product of intervals too large");
  const uint64_t x = static_cast<uint64_t>(xw);
  if (x < q) fail(errc::window_too_small, "product of intervals below q");

  ArithSeq conv = ArithSeq::ones(static_cast<int64_t>((Ns[0] + 1) / 2),
                                 static_cast<int64_t>(Ns[0]));
  int64_t prod_sums = conv.isum();
  for (uint32_t i = 1; i < k; ++i) {
    ArithSeq b = ArithSeq::ones(static_cast<int64_t>((Ns[i] + 1) / 2),
                                static_cast<int64_t>(Ns[i]));
    prod_sums *= b.isum();
    conv = dirichlet_convolve(conv, b);
  }
  if (conv.isum() != prod_sums)
    fail(errc::identity_violation, "convolution sum failed to factor");

  BetaKReport rep;
  rep.q = q;
  rep.k = k;
  rep.x = x;
  rep.j = 1;
  rep.sum_conv = static_cast<double>(conv.isum());
  rep.gamma = 2.0 * rep.sum_conv / static_cast<double>(x);
  rep.X = shifted_self_product(conv, q);
  rep.psi_sq = psi_k_sq_integral(k, grid);
  rep.reference =
      rep.gamma * rep.gamma * static_cast<double>(x) * rep.psi_sq;
  return rep;
}

}  // namespace nrlab
