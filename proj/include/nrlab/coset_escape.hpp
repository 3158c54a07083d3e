#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrlab/errors.hpp"
#include "nrlab/sieve.hpp"

namespace nrlab {

// Finite abelian group as a product of cyclic factors Z/n_1 x ... x Z/n_s.
// Elements are flat indices 0..order-1 in mixed radix (first factor is the
// fastest digit); arithmetic is componentwise.
class FiniteAbelianGroup {
 public:
  explicit FiniteAbelianGroup(std::vector<uint32_t> factors);

  uint64_t order() const { return order_; }
  const std::vector<uint32_t>& factors() const { return factors_; }
  // Number of prime factors of the order, with multiplicity.
  unsigned dimension() const;

  uint64_t add(uint64_t a, uint64_t b) const;
  uint64_t neg(uint64_t a) const;
  std::vector<uint32_t> decode(uint64_t e) const;
  uint64_t encode(const std::vector<uint32_t>& tuple) const;

  std::string describe() const;  // factor orders joined by 'x', e.g. "2x2x5"

 private:
  std::vector<uint32_t> factors_;
  uint64_t order_ = 1;
};

// Prime factors of n with multiplicity (dimension of Z/n).
unsigned big_omega(uint64_t n);

// Subgroup as an explicit sorted member list (canonical form).
struct Subgroup {
  std::vector<uint64_t> members;

  uint64_t order() const { return members.size(); }
  unsigned dimension() const { return big_omega(members.size()); }
  bool contains(uint64_t e) const;
};

// Closure of a generating set: the subgroup generated by gens (0 included).
Subgroup subgroup_closure(const FiniteAbelianGroup& G,
                          const std::vector<uint64_t>& gens);

// All subgroups in canonical form, by iterative closure growth.
// LimitExceeded when |G| > 1e4.
std::vector<Subgroup> subgroup_enumerate(const FiniteAbelianGroup& G);

// {a_1 + ... + a_k : a_i in A}, computed incrementally as ((k-1)A) + A.
// InvalidArity for k = 0.
std::vector<uint64_t> sumset_iterate(const FiniteAbelianGroup& G,
                                     const std::vector<uint64_t>& A,
                                     uint64_t k);

struct Coset {
  uint64_t rep = 0;
  Subgroup sub;
};

// A witnessed covering instance: kA is contained in a union of cosets of
// proper subgroups, and that union is itself proper. The complexity tuple
// (m_0, ..., m_{d-1}) counts cosets by subgroup dimension; its entries sum
// to the number of cosets.
class Configuration {
 public:
  Configuration(uint64_t k, const FiniteAbelianGroup& G,
                std::vector<uint64_t> A, std::vector<Coset> cosets);

  uint64_t k() const { return k_; }
  const std::vector<uint64_t>& A() const { return A_; }
  const std::vector<Coset>& cosets() const { return cosets_; }
  const std::vector<uint64_t>& complexity() const { return complexity_; }

 private:
  uint64_t k_ = 0;
  std::vector<uint64_t> A_;
  std::vector<Coset> cosets_;
  std::vector<uint64_t> complexity_;
};

struct EscapeResult {
  bool escaped = false;
  uint64_t k = 0;        // smallest k with kA outside the cover, if escaped
  uint64_t witness = 0;  // smallest escaping element of kA, if escaped
  std::vector<uint64_t> closure;  // <A> when contained (a proper subgroup)
};

// The escape dichotomy for one instance: either some kA leaves the union of
// the cosets (smallest such k returned), or the iterated sumsets stabilize
// to <A> inside the cover, which is then a proper subgroup. 0 not in A ->
// MissingIdentity; cover not a proper subset -> NotProper.
EscapeResult escape_k(const FiniteAbelianGroup& G,
                      const std::vector<uint64_t>& A,
                      const std::vector<Coset>& cosets);

struct InstanceClassRow {
  std::string group;
  uint64_t a_size = 0;
  uint64_t cover_size = 0;
  std::string outcome;  // "escape" or "contained"
  uint64_t k = 0;       // 0 for containment
  uint64_t count = 0;
};

struct PropositionReport {
  unsigned d = 0, m = 0;
  uint64_t order_limit = 0;
  uint64_t seed = 0;
  uint64_t groups = 0;
  uint64_t instances = 0;
  uint64_t escapes = 0;
  uint64_t containments = 0;
  uint64_t max_escape_k = 0;
  bool dichotomy_holds = false;
  std::vector<InstanceClassRow> rows;
};

// Sweep every abelian group of dimension <= d and order <= order_limit, all
// covers by at most m cosets of proper subgroups with proper union, and all
// A containing 0 (exhaustive up to order 20, 1000 seeded samples per group
// above). Confirms the escape-or-containment dichotomy in every instance and
// records the largest finite escape k. LimitExceeded beyond d <= 3, m <= 3,
// order_limit <= 60.
PropositionReport verify_proposition(unsigned d, unsigned m,
                                     uint64_t order_limit,
                                     uint64_t seed = 0xC05E7);

struct PrimrootEscapeReport {
  uint64_t p = 0, bound = 0, k_limit = 0;
  std::vector<uint64_t> A;  // distinct discrete logs of 1..bound (mod p)
  bool escaped = false;
  uint64_t k = 0;                // first escape index when escaped
  uint64_t witness_exponent = 0; // escaping exponent (coprime to p-1)
  uint64_t witness_product = 0;  // the corresponding primitive root mod p
  bool stabilized_proper = false;  // <A> proper: no k ever escapes
  bool direct_escaped = false;     // order-check search among products
  uint64_t direct_k = 0;
  bool agrees = false;  // group-theoretic and direct searches match
};

// The discrete-log application: A = {log_g n : n <= bound, gcd(n, p) = 1}
// inside Z/(p-1), covered by the subgroups {x : rx = 0} over proper divisors
// r of p-1 (i.e. the non-generators {x : gcd(x, p-1) > 1}). kA escaping the
// cover says some product of at most k integers <= bound is a primitive
// root mod p; the report cross-checks that against a direct multiplicative
// search certified by order checks. Needs p <= sieve limit.
PrimrootEscapeReport primroot_escape(uint64_t p, uint64_t bound,
                                     uint64_t k_limit, const SieveTables& sv);

}  // namespace nrlab
