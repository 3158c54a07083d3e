#include "nrlab/coset_escape.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "nrlab/characters.hpp"

namespace nrlab {
namespace {

uint64_t powmod_u64(uint64_t base, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = static_cast<uint64_t>(
        static_cast<unsigned __int128>(r) * base % m);
    base = static_cast<uint64_t>(
        static_cast<unsigned __int128>(base) * base % m);
    e >>= 1;
  }
  return r;
}

}  // namespace

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<uint32_t> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty())
    fail(errc::invalid_limit, "group needs at least one cyclic factor");
  unsigned __int128 ord = 1;
  for (uint32_t n : factors_) {
    if (n < 1) fail(errc::invalid_limit, "cyclic factor must be >= 1");
    ord *= n;
    if (ord > (static_cast<unsigned __int128>(1) << 62))
      fail(errc::limit_exceeded, "group order too large");
  }
  order_ = static_cast<uint64_t>(ord);
}

unsigned FiniteAbelianGroup::dimension() const { return big_omega(order_); }

uint64_t FiniteAbelianGroup::add(uint64_t a, uint64_t b) const {
  uint64_t res = 0, radix = 1;
  for (uint32_t n : factors_) {
    uint64_t da = a % n, db = b % n;
    a /= n;
    b /= n;
    res += ((da + db) % n) * radix;
    radix *= n;
  }
  return res;
}

uint64_t FiniteAbelianGroup::neg(uint64_t a) const {
  uint64_t res = 0, radix = 1;
  for (uint32_t n : factors_) {
    uint64_t da = a % n;
    a /= n;
    res += ((n - da) % n) * radix;
    radix *= n;
  }
  return res;
}

std::vector<uint32_t> FiniteAbelianGroup::decode(uint64_t e) const {
  std::vector<uint32_t> t(factors_.size());
  for (size_t i = 0; i < factors_.size(); ++i) {
    t[i] = static_cast<uint32_t>(e % factors_[i]);
    e /= factors_[i];
  }
  return t;
}

uint64_t FiniteAbelianGroup::encode(const std::vector<uint32_t>& tuple) const {
  if (tuple.size() != factors_.size())
    fail(errc::out_of_range, "tuple arity mismatch");
  uint64_t res = 0, radix = 1;
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (tuple[i] >= factors_[i])
      fail(errc::out_of_range, "tuple entry out of range");
    res += tuple[i] * radix;
    radix *= factors_[i];
  }
  return res;
}

std::string FiniteAbelianGroup::describe() const {
  std::ostringstream os;
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << 'x';
    os << factors_[i];
  }
  return os.str();
}

unsigned big_omega(uint64_t n) {
  unsigned c = 0;
  for (uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      n /= p;
      ++c;
    }
  if (n > 1) ++c;
  return c;
}

bool Subgroup::contains(uint64_t e) const {
  return std::binary_search(members.begin(), members.end(), e);
}

Subgroup subgroup_closure(const FiniteAbelianGroup& G,
                          const std::vector<uint64_t>& gens) {
  std::vector<uint8_t> in(G.order(), 0);
  std::vector<uint64_t> work{0};
  in[0] = 1;
  for (size_t i = 0; i < work.size(); ++i)
    for (uint64_t g : gens) {
      uint64_t y = G.add(work[i], g);
      if (!in[y]) {
        in[y] = 1;
        work.push_back(y);
      }
    }
  Subgroup H;
  for (uint64_t e = 0; e < G.order(); ++e)
    if (in[e]) H.members.push_back(e);
  return H;
}

std::vector<Subgroup> subgroup_enumerate(const FiniteAbelianGroup& G) {
  if (G.order() > 10'000)
    fail(errc::limit_exceeded, "subgroup enumeration capped at order 1e4");
  std::set<std::vector<uint64_t>> seen;
  std::vector<Subgroup> out;
  std::vector<size_t> work;

  Subgroup trivial;
  trivial.members = {0};
  seen.insert(trivial.members);
  out.push_back(std::move(trivial));
  work.push_back(0);

  for (size_t i = 0; i < work.size(); ++i) {
    // grow out[work[i]] by one element; closing a subgroup under +e adds the
    // whole cyclic ladder of cosets H, H+e, H+2e, ...
    std::vector<uint64_t> base = out[work[i]].members;
    for (uint64_t e = 0; e < G.order(); ++e) {
      if (std::binary_search(base.begin(), base.end(), e)) continue;
      std::vector<uint8_t> in(G.order(), 0);
      std::vector<uint64_t> stack;
      for (uint64_t h : base) in[h] = 1;
      stack = base;
      for (size_t s = 0; s < stack.size(); ++s) {
        uint64_t y = G.add(stack[s], e);
        if (!in[y]) {
          in[y] = 1;
          stack.push_back(y);
        }
      }
      std::vector<uint64_t> mem;
      for (uint64_t x = 0; x < G.order(); ++x)
        if (in[x]) mem.push_back(x);
      if (seen.insert(mem).second) {
        Subgroup H;
        H.members = std::move(mem);
        out.push_back(std::move(H));
        work.push_back(out.size() - 1);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.members.size() != b.members.size()
               ? a.members.size() < b.members.size()
               : a.members < b.members;
  });
  return out;
}

std::vector<uint64_t> sumset_iterate(const FiniteAbelianGroup& G,
                                     const std::vector<uint64_t>& A,
                                     uint64_t k) {
  if (k == 0) fail(errc::invalid_arity, "iterated sumset needs k >= 1");
  if (A.empty()) fail(errc::out_of_range, "iterated sumset needs A nonempty");
  std::vector<uint8_t> S(G.order(), 0);
  for (uint64_t a : A) {
    if (a >= G.order()) fail(errc::out_of_range, "element outside the group");
    S[a] = 1;
  }
  for (uint64_t step = 2; step <= k; ++step) {
    std::vector<uint8_t> next(G.order(), 0);
    for (uint64_t x = 0; x < G.order(); ++x)
      if (S[x])
        for (uint64_t a : A) next[G.add(x, a)] = 1;
    if (next == S) break;  // fixed point of X -> X + A; all later steps equal
    S = std::move(next);
  }
  std::vector<uint64_t> out;
  for (uint64_t x = 0; x < G.order(); ++x)
    if (S[x]) out.push_back(x);
  return out;
}

// ---- configurations and escape ----------------------------------------------

namespace {

std::vector<uint64_t> coset_members(const FiniteAbelianGroup& G,
                                    const Coset& c) {
  std::vector<uint64_t> v;
  v.reserve(c.sub.members.size());
  for (uint64_t h : c.sub.members) v.push_back(G.add(c.rep, h));
  std::sort(v.begin(), v.end());
  return v;
}

void check_subgroup(const FiniteAbelianGroup& G, const Subgroup& H) {
  if (H.members.empty() || H.members[0] != 0)
    fail(errc::missing_identity, "subgroup must contain 0");
  if (!std::is_sorted(H.members.begin(), H.members.end()))
    fail(errc::out_of_range, "subgroup members must be sorted");
  for (uint64_t a : H.members)
    for (uint64_t b : H.members)
      if (!H.contains(G.add(a, b)))
        fail(errc::out_of_range, "subgroup not closed under addition");
}

}  // namespace

Configuration::Configuration(uint64_t k, const FiniteAbelianGroup& G,
                             std::vector<uint64_t> A,
                             std::vector<Coset> cosets)
    : k_(k), A_(std::move(A)), cosets_(std::move(cosets)) {
  if (k_ == 0) fail(errc::invalid_arity, "configuration needs k >= 1");
  if (std::find(A_.begin(), A_.end(), 0) == A_.end())
    fail(errc::missing_identity, "A must contain 0");
  if (cosets_.empty()) fail(errc::out_of_range, "configuration needs cosets");

  std::vector<std::vector<uint64_t>> sets;
  std::vector<uint8_t> cover(G.order(), 0);
  for (const Coset& c : cosets_) {
    check_subgroup(G, c.sub);
    if (c.sub.members.size() >= G.order())
      fail(errc::not_proper, "coset subgroups must be proper");
    sets.push_back(coset_members(G, c));
    for (uint64_t x : sets.back()) cover[x] = 1;
  }
  std::sort(sets.begin(), sets.end());
  if (std::adjacent_find(sets.begin(), sets.end()) != sets.end())
    fail(errc::out_of_range, "cosets must be pairwise distinct as sets");
  if (std::count(cover.begin(), cover.end(), uint8_t{1}) ==
      static_cast<long>(G.order()))
    fail(errc::not_proper, "union of cosets must be a proper subset");

  for (uint64_t x : sumset_iterate(G, A_, k_))
    if (!cover[x])
      fail(errc::identity_violation,
           "kA is not contained in the union of the cosets");

  complexity_.assign(std::max(1u, G.dimension()), 0);
  for (const Coset& c : cosets_) ++complexity_[c.sub.dimension()];
}

EscapeResult escape_k(const FiniteAbelianGroup& G,
                      const std::vector<uint64_t>& A,
                      const std::vector<Coset>& cosets) {
  if (std::find(A.begin(), A.end(), 0) == A.end())
    fail(errc::missing_identity, "A must contain 0");
  std::vector<uint8_t> cover(G.order(), 0);
  uint64_t covered = 0;
  for (const Coset& c : cosets)
    for (uint64_t h : c.sub.members) {
      uint64_t x = G.add(c.rep, h);
      if (!cover[x]) {
        cover[x] = 1;
        ++covered;
      }
    }
  if (covered == G.order())
    fail(errc::not_proper, "cover must be a proper subset of the group");

  std::vector<uint8_t> S(G.order(), 0);
  for (uint64_t a : A) {
    if (a >= G.order()) fail(errc::out_of_range, "element outside the group");
    S[a] = 1;
  }
  for (uint64_t k = 1; k <= G.order(); ++k) {
    for (uint64_t x = 0; x < G.order(); ++x)
      if (S[x] && !cover[x]) {
        EscapeResult res;
        res.escaped = true;
        res.k = k;
        res.witness = x;
        return res;
      }
    std::vector<uint8_t> next(G.order(), 0);
    for (uint64_t x = 0; x < G.order(); ++x)
      if (S[x])
        for (uint64_t a : A) next[G.add(x, a)] = 1;
    if (next == S) {
      // stabilized inside the cover: S = <A>, proper because the cover is
      EscapeResult res;
      res.escaped = false;
      for (uint64_t x = 0; x < G.order(); ++x)
        if (S[x]) res.closure.push_back(x);
      return res;
    }
    S = std::move(next);
  }
  fail(errc::identity_violation,
       "sumsets neither escaped nor stabilized within |G| steps");
}

// ---- the proposition sweep ----------------------------------------------------

namespace {

void partitions_of(unsigned e, unsigned cap, std::vector<unsigned>& cur,
                   std::vector<std::vector<unsigned>>& out) {
  if (e == 0) {
    out.push_back(cur);
    return;
  }
  for (unsigned part = std::min(e, cap); part >= 1; --part) {
    cur.push_back(part);
    partitions_of(e - part, part, cur, out);
    cur.pop_back();
  }
}

// All abelian groups (up to isomorphism) with order <= limit and dimension
// <= d, as canonical ascending factor lists; ordered by (order, factors).
std::vector<std::vector<uint32_t>> enumerate_groups(unsigned d,
                                                    uint64_t limit) {
  std::vector<std::vector<uint32_t>> out;
  for (uint64_t n = 2; n <= limit; ++n) {
    if (big_omega(n) > d) continue;
    // factor n and collect per-prime partition choices
    std::vector<std::pair<uint64_t, unsigned>> fac;
    uint64_t mm = n;
    for (uint64_t p = 2; p * p <= mm; ++p)
      if (mm % p == 0) {
        unsigned e = 0;
        while (mm % p == 0) {
          mm /= p;
          ++e;
        }
        fac.emplace_back(p, e);
      }
    if (mm > 1) fac.emplace_back(mm, 1);

    std::vector<std::vector<std::vector<unsigned>>> choices;
    for (auto [p, e] : fac) {
      std::vector<std::vector<unsigned>> parts;
      std::vector<unsigned> cur;
      partitions_of(e, e, cur, parts);
      choices.push_back(std::move(parts));
    }
    std::vector<size_t> idx(fac.size(), 0);
    std::vector<std::vector<uint32_t>> variants;
    for (;;) {
      std::vector<uint32_t> factors;
      for (size_t i = 0; i < fac.size(); ++i)
        for (unsigned e : choices[i][idx[i]]) {
          uint32_t pe = 1;
          for (unsigned j = 0; j < e; ++j)
            pe *= static_cast<uint32_t>(fac[i].first);
          factors.push_back(pe);
        }
      std::sort(factors.begin(), factors.end());
      variants.push_back(std::move(factors));
      size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == choices[pos].size()) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos == idx.size()) break;
    }
    std::sort(variants.begin(), variants.end());
    for (auto& v : variants) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

PropositionReport verify_proposition(unsigned d, unsigned m,
                                     uint64_t order_limit, uint64_t seed) {
  if (d < 1 || d > 3 || m < 1 || m > 3 || order_limit < 2 || order_limit > 60)
    fail(errc::limit_exceeded,
         "sweep capped at d <= 3, m <= 3, order_limit <= 60");

  PropositionReport rep;
  rep.d = d;
  rep.m = m;
  rep.order_limit = order_limit;
  rep.seed = seed;
  rep.dichotomy_holds = true;

  // (group ordinal, |A|, cover size, outcome 0=escape 1=contained, k) -> count
  std::map<std::tuple<size_t, uint64_t, uint64_t, int, uint64_t>, uint64_t>
      classes;
  const auto groups = enumerate_groups(d, order_limit);
  std::vector<std::string> labels;

  for (size_t gi = 0; gi < groups.size(); ++gi) {
    FiniteAbelianGroup G(groups[gi]);
    labels.push_back(G.describe());
    const uint64_t n = G.order();
    const uint64_t full =
        n == 64 ? ~0ull : ((uint64_t{1} << n) - 1);

    std::vector<uint8_t> addt(n * n);
    for (uint64_t a = 0; a < n; ++a)
      for (uint64_t b = 0; b < n; ++b)
        addt[a * n + b] = static_cast<uint8_t>(G.add(a, b));

    // distinct cosets of proper subgroups, as bitmasks
    std::vector<uint64_t> coset_masks;
    for (const Subgroup& H : subgroup_enumerate(G)) {
      if (H.members.size() == n) continue;
      uint64_t seen = 0;
      for (uint64_t r = 0; r < n; ++r) {
        if (seen & (uint64_t{1} << r)) continue;
        uint64_t mask = 0;
        for (uint64_t h : H.members)
          mask |= uint64_t{1} << addt[r * n + h];
        seen |= mask;
        coset_masks.push_back(mask);
      }
    }

    // unions of 1..m distinct cosets with proper union
    std::vector<std::pair<uint64_t, uint64_t>> covers;  // (mask, #cosets)
    std::vector<size_t> pick;
    auto combos = [&](auto&& self, size_t start, uint64_t umask) -> void {
      if (!pick.empty() && umask != full)
        covers.emplace_back(umask, pick.size());
      if (pick.size() == m) return;
      for (size_t i = start; i < coset_masks.size(); ++i) {
        pick.push_back(i);
        self(self, i + 1, umask | coset_masks[i]);
        pick.pop_back();
      }
    };
    combos(combos, 0, 0);

    ++rep.groups;

    std::vector<uint64_t> elems;  // scratch: elements of A
    std::vector<uint64_t> chain;  // S_1, S_2, ... up to stabilization
    auto run_instance = [&](uint64_t Am) {
      elems.clear();
      for (uint64_t x = 0; x < n; ++x)
        if (Am & (uint64_t{1} << x)) elems.push_back(x);
      chain.clear();
      uint64_t S = Am;
      for (;;) {
        chain.push_back(S);
        uint64_t next = 0;
        for (uint64_t x = 0; x < n; ++x)
          if (S & (uint64_t{1} << x))
            for (uint64_t a : elems)
              next |= uint64_t{1} << addt[x * n + a];
        if (next == S) break;
        if (chain.size() > n) {  // cannot happen: 0 in A forces growth
          rep.dichotomy_holds = false;
          break;
        }
        S = next;
      }
      for (const auto& [U, csize] : covers) {
        ++rep.instances;
        uint64_t hit = 0;
        for (size_t ki = 0; ki < chain.size(); ++ki)
          if (chain[ki] & ~U) {
            hit = ki + 1;
            break;
          }
        if (hit) {
          ++rep.escapes;
          rep.max_escape_k = std::max(rep.max_escape_k, hit);
          ++classes[{gi, static_cast<uint64_t>(elems.size()), csize, 0, hit}];
        } else {
          ++rep.containments;
          ++classes[{gi, static_cast<uint64_t>(elems.size()), csize, 1, 0}];
        }
      }
    };

    if (n <= 20) {
      for (uint64_t Am = 1; Am <= full; Am += 2) run_instance(Am);
    } else {
      std::seed_seq sq{seed, static_cast<uint64_t>(gi)};
      std::mt19937_64 rng(sq);
      for (int s = 0; s < 1000; ++s) {
        uint64_t Am = (rng() & (full >> 1)) << 1 | 1;
        run_instance(Am);
      }
    }
  }

  for (const auto& [key, count] : classes) {
    const auto& [gi, asz, csz, outcome, k] = key;
    rep.rows.push_back(InstanceClassRow{labels[gi], asz, csz,
                                        outcome == 0 ? "escape" : "contained",
                                        k, count});
  }
  return rep;
}

// ---- discrete-log application -------------------------------------------------

PrimrootEscapeReport primroot_escape(uint64_t p, uint64_t bound,
                                     uint64_t k_limit, const SieveTables& sv) {
  if (p > 1'000'000) fail(errc::limit_exceeded, "p capped at 1e6");
  if (p > sv.limit())
    fail(errc::limit_exceeded, "p - 1 must factor within the sieve");
  if (bound < 2) fail(errc::out_of_range, "need bound >= 2");
  if (k_limit < 1) fail(errc::invalid_arity, "need k >= 1");
  const uint64_t g = least_primitive_root(p, sv);  // validates p odd prime
  const uint64_t ord = p - 1;

  std::vector<uint32_t> dl(p, 0);
  {
    uint64_t pw = 1;
    for (uint64_t t = 0; t < ord; ++t) {
      dl[pw] = static_cast<uint32_t>(t);
      pw = pw * g % p;
    }
  }

  PrimrootEscapeReport rep;
  rep.p = p;
  rep.bound = bound;
  rep.k_limit = k_limit;

  std::vector<uint8_t> S(ord, 0);
  for (uint64_t nn = 1; nn <= bound; ++nn) {
    if (nn % p == 0) continue;
    uint64_t e = dl[nn % p];
    if (!S[e]) {
      S[e] = 1;
      rep.A.push_back(e);
    }
  }
  std::sort(rep.A.begin(), rep.A.end());

  // escape = some exponent coprime to p-1 (a generator) enters kA
  auto escape_witness = [&](const std::vector<uint8_t>& mask) -> int64_t {
    for (uint64_t x = 0; x < ord; ++x)
      if (mask[x] && std::gcd(x, ord) == 1) return static_cast<int64_t>(x);
    return -1;
  };
  for (uint64_t k = 1; k <= k_limit; ++k) {
    int64_t w = escape_witness(S);
    if (w >= 0) {
      rep.escaped = true;
      rep.k = k;
      rep.witness_exponent = static_cast<uint64_t>(w);
      rep.witness_product = powmod_u64(g, rep.witness_exponent, p);
      break;
    }
    std::vector<uint8_t> next(ord, 0);
    for (uint64_t x = 0; x < ord; ++x)
      if (S[x])
        for (uint64_t a : rep.A) next[(x + a) % ord] = 1;
    if (next == S) {
      rep.stabilized_proper = true;  // <A> inside the non-generators forever
      break;
    }
    S = std::move(next);
  }

  // independent check: multiply products of <= k integers in [1, bound] and
  // certify primitive roots by order tests (no discrete logs involved)
  const auto fac = sv.factor(ord);
  auto is_primroot = [&](uint64_t t) {
    if (t % p == 0) return false;
    for (auto [r, e] : fac)
      if (powmod_u64(t, ord / r, p) == 1) return false;
    return true;
  };
  std::vector<uint8_t> T(p, 0);
  std::vector<uint64_t> base;
  for (uint64_t nn = 1; nn <= bound; ++nn)
    if (nn % p != 0) {
      uint64_t r = nn % p;
      if (!T[r]) {
        T[r] = 1;
        base.push_back(r);
      }
    }
  for (uint64_t k = 1; k <= k_limit && !rep.direct_escaped; ++k) {
    if (k > 1) {
      std::vector<uint8_t> next(p, 0);
      for (uint64_t t = 1; t < p; ++t)
        if (T[t])
          for (uint64_t b : base) next[t * b % p] = 1;
      T = std::move(next);
    }
    for (uint64_t t = 1; t < p; ++t)
      if (T[t] && is_primroot(t)) {
        rep.direct_escaped = true;
        rep.direct_k = k;
        break;
      }
  }

  rep.agrees = (rep.escaped == rep.direct_escaped) &&
               (!rep.escaped || rep.k == rep.direct_k);
  return rep;
}

}  // namespace nrlab
