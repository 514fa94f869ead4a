#pragma once

// Countable inverse and direct systems of finitely generated abelian groups.
//
// Towers are generated lazily from pure functions of the level. Every
// "eventually" statement the module makes is certified only up to the
// tower's bound; anything that would need an unbounded search comes back as
// Unproven rather than as a guess.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ktower/fgab.hpp"

namespace ktower {

inline constexpr std::size_t kDefaultBound = 64;

enum class TailKind { EventuallyConstant, LevelwiseFinite, General };

struct TailClass {
  TailKind kind = TailKind::General;
  std::size_t stable_from = 0;  // only meaningful for EventuallyConstant

  static TailClass eventually_constant(std::size_t n) { return {TailKind::EventuallyConstant, n}; }
  static TailClass levelwise_finite() { return {TailKind::LevelwiseFinite, 0}; }
  static TailClass general() { return {TailKind::General, 0}; }
};

std::string to_string(TailKind kind);

enum class Direction { Inverse, Direct };

using GroupFn = std::function<FgAbGroup(std::size_t)>;
using MapFn = std::function<Homomorphism(std::size_t)>;
using LevelPredicate = std::function<bool(std::size_t)>;

struct TowerSpec {
  std::string name;
  std::size_t base = 0;
  GroupFn group_at;
  /// Inverse: level n -> n-1 for n > base. Direct: level n -> n+1.
  /// Absent when the connecting maps are not known.
  std::optional<MapFn> map_at;
  TailClass tail;
  std::size_t bound = kDefaultBound;
  /// Optional cheap triviality probe; defaults to group_at(n).is_trivial().
  LevelPredicate trivial_at;
  /// Set when every level is the same group and every connecting map the
  /// same endomorphism; overrides group_at and map_at.
  std::optional<Homomorphism> stationary;
};

/// Lazily generated tower. Queries validate the tail contract: levels of a
/// LevelwiseFinite tower must be finite, and an EventuallyConstant(N) tower
/// repeats level N with identity maps above N whatever the generators say.
template <Direction D>
class Tower {
 public:
  /// Throws MalformedInput for a missing generator, a bound below the base,
  /// or an EventuallyConstant index below the base.
  explicit Tower(TowerSpec spec);

  const std::string& name() const { return spec_.name; }
  std::size_t base() const { return spec_.base; }
  std::size_t bound() const { return spec_.bound; }
  const TailClass& tail() const { return spec_.tail; }
  bool has_maps() const { return spec_.map_at.has_value(); }
  const std::optional<Homomorphism>& stationary() const { return spec_.stationary; }

  FgAbGroup group_at(std::size_t n) const;
  /// Inverse towers: map from level n to level n-1 (n > base).
  /// Direct towers: map from level n to level n+1 (n >= base, n < bound).
  Homomorphism map_at(std::size_t n) const;
  bool trivial_at(std::size_t n) const;

  Tower with_bound(std::size_t bound) const;

 private:
  void check_level(std::size_t n) const;
  TowerSpec spec_;
};

using InverseTower = Tower<Direction::Inverse>;
using DirectTower = Tower<Direction::Direct>;

struct Lim1Descriptor;
struct LimitDescriptor;

namespace limit {
struct ExactGroup {
  FgAbGroup group;
  std::string note;  // which structural rule produced it
};
struct Trivial {
  std::optional<std::size_t> from_level;  // every level from here to the bound is 0
  std::string note;
};
struct ProfiniteNontrivial {
  std::size_t first_level;
  std::vector<BigInt> stable_orders;  // |stable image| at first_level, first_level + 1, ...
};
struct Unrepresentable {
  std::string reason;
  std::shared_ptr<const LimitDescriptor> limit;
  std::shared_ptr<const Lim1Descriptor> lim1;
};
struct Unproven {
  std::size_t bound;
  std::string reason;
};
}  // namespace limit

struct LimitDescriptor {
  std::variant<limit::ExactGroup, limit::Trivial, limit::ProfiniteNontrivial, limit::Unrepresentable,
               limit::Unproven>
      value;

  bool is_trivial() const;
  bool is_unproven() const;
  /// The group when it is known exactly (Trivial gives the trivial group).
  std::optional<FgAbGroup> exact_group() const;
  std::string kind() const;
};

namespace lim1v {
struct Zero {
  std::string rule;
};
struct NonzeroUncomputed {
  std::size_t witness_level;
  std::string note;
};
struct Unproven {
  std::size_t bound;
};
}  // namespace lim1v

struct Lim1Descriptor {
  std::variant<lim1v::Zero, lim1v::NonzeroUncomputed, lim1v::Unproven> value;

  bool is_zero() const { return std::holds_alternative<lim1v::Zero>(value); }
  std::string kind() const;
};

namespace ml {
struct VerifiedUpTo {
  std::size_t bound;
};
struct FailedAt {
  std::size_t level;
  std::string witness;
};
struct ForcedByRule {
  std::string rule;
};
}  // namespace ml

using MittagLefflerVerdict = std::variant<ml::VerifiedUpTo, ml::FailedAt, ml::ForcedByRule>;

inline const char* const kRuleLevelwiseFinite = "levelwise-finite";
inline const char* const kRuleEventuallyConstant = "eventually-constant";

/// Canonical forms of im(level + k -> level) for k = 0..depth.
/// Throws BoundExceeded when level + depth > bound and Unresolved when the
/// tower has no maps.
std::vector<FgAbGroup> image_chain(const InverseTower& t, std::size_t level, std::size_t depth);

MittagLefflerVerdict is_mittag_leffler(const InverseTower& t);
Lim1Descriptor lim1(const InverseTower& t);
LimitDescriptor inverse_limit(const InverseTower& t);
LimitDescriptor direct_limit(const DirectTower& t);

/// Least n0 with every level in [n0, bound] trivial, if any.
template <Direction D>
std::optional<std::size_t> cofinally_trivial_from(const Tower<D>& t);

/// A family n -> Z/order(n), n >= first.
struct CyclicFamily {
  std::string name;
  std::size_t first = 1;
  std::function<BigInt(std::size_t)> order;

  static CyclicFamily identity(std::size_t first = 1);  // n -> n
  static CyclicFamily constant(const BigInt& value, std::size_t first = 1);
};

/// A countable product or sum of a cyclic family, kept symbolic; only finite
/// truncations are ever materialised.
struct CyclicFamilyDescriptor {
  enum class Kind { Product, Sum };
  CyclicFamily family;
  Kind kind = Kind::Product;

  FgAbGroup truncate(std::size_t n) const;
};

using KDegree = std::variant<FgAbGroup, LimitDescriptor, CyclicFamilyDescriptor>;

/// A Z/2-graded pair of group descriptors. Degree i and i + 2 are the same
/// slot. Some results are only known as the total K0 + K1; then `total` is
/// set and the parity split is left empty.
struct KGradedGroup {
  std::optional<KDegree> even;
  std::optional<KDegree> odd;
  std::optional<KDegree> total;

  const std::optional<KDegree>& degree(long i) const;
};

struct GradedInverseTower {
  InverseTower even;
  InverseTower odd;
};

/// Degree i is lim of the degree-i tower once lim^1 of the degree-(1 - i)
/// tower is known to vanish; otherwise it is Unrepresentable.
/// Throws MalformedInput when the two towers disagree on base or bound.
KGradedGroup milnor_assemble(const GradedInverseTower& towers);

/// Finite product of Z/order(n) over first <= n <= last, with the change of
/// basis from the coordinatewise presentation.
Presentation present_truncated_product(const CyclicFamily& family, std::size_t last);
FgAbGroup truncated_product(const CyclicFamily& family, std::size_t last);

struct TorsionWitness {
  std::vector<std::size_t> levels;  // truncation index at which the order jumped
  std::vector<BigInt> orders;       // strictly increasing
};

/// Orders of the all-ones element of the truncated products up to `bound`;
/// a witness when they increase at least once, nullopt when they stay flat.
std::optional<TorsionWitness> unbounded_torsion_witness(const CyclicFamily& family, std::size_t bound);

namespace builtin {
/// (Z, x factor).
InverseTower z_times(const BigInt& factor, std::size_t bound = kDefaultBound, std::size_t base = 0);
/// Z/p^n with reduction maps, n >= 1.
InverseTower p_adic(const BigInt& p, std::size_t bound = kDefaultBound);
/// G at every level with identity maps, eventually constant from base 0.
InverseTower constant_inverse(const FgAbGroup& g, std::size_t bound = kDefaultBound);
DirectTower constant_direct(const FgAbGroup& g, std::size_t bound = kDefaultBound);
/// Truncated products of a cyclic family with coordinate projections.
InverseTower product_tower(const CyclicFamily& family, std::size_t bound = kDefaultBound);
/// Truncated sums of a cyclic family with coordinate inclusions.
DirectTower sum_tower(const CyclicFamily& family, std::size_t bound = kDefaultBound);
/// Z/p^n with multiplication-by-p inclusions (colimit is the Pruefer group).
DirectTower pruefer(const BigInt& p, std::size_t bound = kDefaultBound);
/// G at every level with zero connecting maps.
DirectTower zero_maps(const FgAbGroup& g, std::size_t bound = kDefaultBound);
}  // namespace builtin

}  // namespace ktower
