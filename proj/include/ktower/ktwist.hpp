#pragma once

// Twisted K-theory and K-homology of SU(n), SU(infinity), S^3 and countable
// disjoint unions of S^3 at a given twist (Dixmier-Douady class).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ktower/towers.hpp"

namespace ktower {

struct SUFinite {
  std::size_t n;
  std::uint64_t level;
};
struct SUInfinite {
  std::uint64_t level;
};
struct Sphere3 {
  BigInt twist;
};
struct SphereDisjointUnion {
  CyclicFamily twist_of_component;
};

/// A space together with a twist class in H^3(X, Z). Untwisted (zero) classes
/// are rejected: the formulas here are for nontrivial twists only.
class TwistedSpace {
 public:
  using Value = std::variant<SUFinite, SUInfinite, Sphere3, SphereDisjointUnion>;

  static TwistedSpace su(std::size_t n, std::uint64_t level);
  static TwistedSpace su_infinite(std::uint64_t level);
  static TwistedSpace sphere3(const BigInt& twist);
  /// Component n carries twist n unless a family is given.
  static TwistedSpace sphere_union(std::optional<CyclicFamily> twists = std::nullopt);

  const Value& value() const { return value_; }
  std::string describe() const;

 private:
  explicit TwistedSpace(Value v) : value_(std::move(v)) {}
  Value value_;
};

struct KResult {
  KGradedGroup graded;
  std::vector<std::string> provenance;
};

/// gcd{ C(level + i, i) - 1 : 1 <= i <= n - 1 }, the order of every cyclic
/// summand of the twisted K-theory of SU(n). Throws OutOfRange for n < 2 or
/// level < 1.
BigInt su_cyclic_order(std::size_t n, std::uint64_t level);

/// (Z/c(n, level))^(2^(n-1)) as a canonical group.
FgAbGroup su_twisted_total(std::size_t n, std::uint64_t level);

KResult twisted_k(const TwistedSpace& space, std::size_t bound = kDefaultBound);
KResult twisted_khomology(const TwistedSpace& space, std::size_t bound = kDefaultBound);

/// Tensoring with the compact operators leaves K-theory unchanged; only the
/// provenance grows.
KResult stabilize(const KResult& k);

struct DivisibilityTable {
  std::uint64_t level;
  std::size_t n_max;
  std::vector<BigInt> values;  // c(n, level) for n = 2..n_max
  bool chain_ok;               // c(n) | c(m) for every 2 <= m <= n <= n_max
  std::optional<std::size_t> first_one;

  const BigInt& at(std::size_t n) const { return values.at(n - 2); }
};

DivisibilityTable divisibility_table(std::uint64_t level, std::size_t n_max);

/// Level towers for (SU(n), level), base n = 2. Connecting maps are not
/// modelled, so every verdict on them comes from map-independent rules.
InverseTower su_k_total_tower(std::uint64_t level, std::size_t bound = kDefaultBound);
GradedInverseTower su_k_graded_tower(std::uint64_t level, std::size_t bound = kDefaultBound);
DirectTower su_khomology_total_tower(std::uint64_t level, std::size_t bound = kDefaultBound);
DirectTower su_khomology_degree_tower(std::uint64_t level, int parity, std::size_t bound = kDefaultBound);

/// Rationalised rank of a K result (total, or sum of both degrees).
/// Throws Unresolved when a degree is only known as a descriptor.
std::size_t rationalized_rank(const KResult& k);

}  // namespace ktower
