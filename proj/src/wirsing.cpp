#include "nrlab/wirsing.hpp"

#include <algorithm>
#include <cmath>

namespace nrlab {

size_t StepFunction::cell(double t) const {
  if (h <= 0.0) fail(errc::grid_too_coarse, "step function has no grid");
  if (t < 0.0) fail(errc::out_of_range, "step function query below 0");
  size_t idx = static_cast<size_t>(std::floor(t / h + 1e-9));
  if (idx >= values.size()) {
    if (t <= T + 0.5 * h && !values.empty()) return values.size() - 1;
    fail(errc::out_of_range, "step function query beyond T");
  }
  return idx;
}

double StepFunction::at(double t) const { return values[cell(t)]; }

bool StepFunction::within_bound() const {
  if (bound <= 0.0) return true;
  for (double v : values)
    if (std::abs(v) > bound) return false;
  return true;
}

StepFunction StepFunction::constant(double c, double T, double h) {
  if (h <= 0.0 || T <= 0.0)
    fail(errc::grid_too_coarse, "step function needs h > 0 and T > 0");
  StepFunction f;
  f.h = h;
  f.T = T;
  f.values.assign(static_cast<size_t>(std::ceil(T / h - 1e-9)), c);
  return f;
}

namespace {

size_t snap_index(double t, double h) {
  return static_cast<size_t>(std::llround(t / h));
}

}  // namespace

StepFunction solve_a_given_b(const StepFunction& b, double kappa) {
  const double h = b.h;
  if (!(kappa >= 2.0 * h))
    fail(errc::grid_too_coarse, "seed segment must span at least two cells");
  const size_t m = b.size();
  StepFunction a;
  a.h = h;
  a.T = b.T;
  a.values.assign(m, 0.0);

  const size_t nk = std::min(m, snap_index(kappa, h));
  for (size_t i = 0; i < nk; ++i) a.values[i] = 1.0;
  for (size_t n = nk; n < m; ++n) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += a.values[i] * b.values[n - 1 - i];
    a.values[n] = h * s / (h * static_cast<double>(n));
  }
  return a;
}

StepFunction solve_b_given_a(const StepFunction& a, double kappa) {
  const double h = a.h;
  if (!(kappa >= 2.0 * h))
    fail(errc::grid_too_coarse, "seed segment must span at least two cells");
  if (a.size() < 2 || std::abs(a.values[0] - 1.0) > 1e-12)
    fail(errc::bad_seed, "deconvolution needs a = 1 near 0");

  const size_t m = a.size();
  StepFunction b;
  b.h = h;
  b.T = a.T - h;
  b.values.assign(m - 1, 0.0);

  // Equation at t_n = n*h:  h * sum_{i<n} b_i a_{n-1-i} = t_n * a_n, solved
  // for b_{n-1} by forward substitution (a_0 = 1 keeps it well-posed).
  for (size_t n = 1; n < m; ++n) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) s += b.values[i] * a.values[n - 1 - i];
    b.values[n - 1] =
        (static_cast<double>(n) * a.values[n] - s) / a.values[0];
  }
  return b;
}

std::pair<StepFunction, StepFunction> heathbrown_reference(double T, double h) {
  if (T > 2.0) fail(errc::out_of_range, "reference profiles are built for T <= 2");
  if (h <= 0.0 || T < 4.0 * h)
    fail(errc::grid_too_coarse, "reference profiles need T >= 4h");

  const size_t m = static_cast<size_t>(std::ceil(T / h - 1e-9));
  const size_t i1 = snap_index(kHeathBrownC1, h);
  const size_t i2 = snap_index(kHeathBrownC2, h);

  StepFunction a;
  a.h = h;
  a.T = T;
  a.bound = 1.0;
  a.values.assign(m, 0.0);
  for (size_t i = 0; i < m; ++i) {
    if (i <= i1)
      a.values[i] = 1.0;
    else if (i <= i2)
      a.values[i] = 1.0 - 2.0 * std::log(4.0 * std::exp(0.5) * a.grid(i));
    else
      a.values[i] = 0.0;
  }

  StepFunction b;
  b.h = h;
  b.T = T;
  b.values.assign(m, 0.0);
  // Kernel weights 2*log((j+1)/j) make the delay step exact for step b with
  // the breakpoints snapped to cells i1, i2.
  std::vector<double> w(i2, 0.0);
  for (size_t j = i1; j < i2; ++j)
    w[j] = 2.0 * std::log(static_cast<double>(j + 1) / static_cast<double>(j));
  for (size_t i = 0; i < m; ++i) {
    if (i <= i1) {
      b.values[i] = 1.0;
    } else if (i <= i2) {
      b.values[i] = -1.0;
    } else {
      double s = 0.0;
      for (size_t j = i1; j < i2; ++j) s += w[j] * b.values[i - j - 1];
      b.values[i] = s;
    }
  }
  return {std::move(a), std::move(b)};
}

double delay_equation_residual(const StepFunction& b, double t) {
  if (t <= kHeathBrownC2 + 2.0 * b.h)
    fail(errc::out_of_domain, "delay equation only holds past t = 1/4");
  if (t > b.T)
    fail(errc::out_of_range, "query beyond the function's domain");

  const double c1 = kHeathBrownC1, c2 = kHeathBrownC2;
  const size_t K = std::max<size_t>(
      2, static_cast<size_t>(std::ceil((c2 - c1) / b.h)));
  const double du = (c2 - c1) / static_cast<double>(K);
  double integral = 0.0;
  double prev = b.at(t - c1) / c1;
  for (size_t k = 1; k <= K; ++k) {
    double u = c1 + du * static_cast<double>(k);
    double cur = b.at(t - u) / u;
    integral += 0.5 * du * (prev + cur);
    prev = cur;
  }
  return std::abs(b.at(t) - 2.0 * integral);
}

double wirsing_residual(const StepFunction& a, const StepFunction& b,
                        double t) {
  if (t < 0.0 || t > a.T || t > b.T)
    fail(errc::out_of_range, "residual query outside the common domain");
  const double h = a.h;
  const size_t n = std::min(snap_index(t, h), a.size());
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a.values[i] * b.values[n - 1 - i];
  const double tn = h * static_cast<double>(n);
  const double an = n < a.size() ? a.values[n] : a.values[a.size() - 1];
  return std::abs(tn * an - h * s);
}

double heathbrown_kernel_mass(double h) {
  const double c1 = kHeathBrownC1, c2 = kHeathBrownC2;
  const size_t K =
      std::max<size_t>(2, static_cast<size_t>(std::ceil((c2 - c1) / h)));
  const double du = (c2 - c1) / static_cast<double>(K);
  double integral = 0.0;
  double prev = 1.0 / c1;
  for (size_t k = 1; k <= K; ++k) {
    double u = c1 + du * static_cast<double>(k);
    double cur = 1.0 / u;
    integral += 0.5 * du * (prev + cur);
    prev = cur;
  }
  return 2.0 * integral;
}

DensityProfile log_density_profiles(const DirichletCharacter& chi, double T,
                                    size_t grid, const SieveTables& sv) {
  if (grid == 0) fail(errc::grid_too_coarse, "profile needs at least one cell");
  const uint64_t q = chi.modulus();
  const double topf = std::pow(static_cast<double>(q), T);
  if (topf > static_cast<double>(sv.limit()) + 0.5)
    fail(errc::limit_exceeded, "q^T exceeds the sieve limit");
  const uint64_t top = static_cast<uint64_t>(topf);

  DensityProfile prof;
  prof.q = q;
  prof.ts.resize(grid + 1);
  prof.A.resize(grid + 1);
  prof.B.resize(grid + 1);

  std::complex<double> sa{0.0, 0.0}, sb{0.0, 0.0};
  const double lq = std::log(static_cast<double>(q));
  uint64_t n = 1;
  for (size_t k = 0; k <= grid; ++k) {
    double t = T * static_cast<double>(k) / static_cast<double>(grid);
    prof.ts[k] = t;
    // strict cutoff n < q^t: the last admitted n is ceil(q^t) - 1, with the
    // epsilon keeping exact powers (t = 1 etc.) on the strict side
    double cut = std::pow(static_cast<double>(q), t);
    uint64_t n_max = static_cast<uint64_t>(std::ceil(cut - 1e-9)) - 1;
    n_max = std::min(n_max, top);
    for (; n <= n_max; ++n) {
      std::complex<double> v = chi.value(static_cast<int64_t>(n));
      if (v == std::complex<double>{0.0, 0.0}) continue;
      double inv = 1.0 / static_cast<double>(n);
      sa += v * inv;
      double lam = sv.mangoldt(n);
      if (lam != 0.0) sb += v * (lam * inv);
    }
    prof.A[k] = sa / lq;
    prof.B[k] = sb / lq;
  }
  return prof;
}

}  // namespace nrlab
