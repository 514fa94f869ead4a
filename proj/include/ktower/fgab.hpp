#pragma once

// Finitely generated abelian groups in invariant-factor form and the
// homomorphisms between them.
//
// Canonical generators of Z/d_1 + ... + Z/d_t + Z^r are ordered torsion
// first (in chain order), then free. Every coordinate vector, matrix row and
// matrix column in this module is written against that ordering.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ktower/intlin.hpp"

namespace ktower {

struct FgAbGroup {
  std::size_t free_rank = 0;
  std::vector<BigInt> torsion;  // each > 1, d_i | d_{i+1}

  /// Validating constructor: torsion must already be a canonical chain.
  static FgAbGroup make(std::size_t free_rank, std::vector<BigInt> torsion);
  /// Canonicalising constructor from arbitrary cyclic orders. Orders of 1
  /// vanish, orders of 0 become free summands, signs are dropped.
  static FgAbGroup from_cyclic_orders(std::vector<BigInt> orders);
  static FgAbGroup trivial() { return {}; }
  static FgAbGroup free(std::size_t rank) { return FgAbGroup{rank, {}}; }
  static FgAbGroup cyclic(const BigInt& order);

  std::size_t generator_count() const { return torsion.size() + free_rank; }
  std::size_t torsion_count() const { return torsion.size(); }
  /// Order of canonical generator i (0 for a free generator).
  BigInt generator_order(std::size_t i) const;
  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  bool is_finite() const { return free_rank == 0; }
  /// Cardinality, or nullopt for an infinite group.
  std::optional<BigInt> order() const;
  /// generator_count x torsion_count diagonal matrix whose columns span the
  /// relation lattice.
  IntMatrix relation_matrix() const;
  /// Reduce torsion coordinates into [0, d_i).
  void reduce(std::vector<BigInt>& coords) const;
  std::string to_string() const;

  friend bool operator==(const FgAbGroup&, const FgAbGroup&) = default;
};

/// A group given by generators and relations together with the change of
/// basis to its canonical form.
struct Presentation {
  FgAbGroup group;
  IntMatrix to_canonical;    // canonical gens x presentation gens
  IntMatrix from_canonical;  // presentation gens x canonical gens

  /// Coordinates of a presentation-generator vector in canonical form.
  std::vector<BigInt> transport(const std::vector<BigInt>& coords) const;
};

/// Z^rows / (column span of relations).
Presentation present(const IntMatrix& relations);
FgAbGroup from_presentation(const IntMatrix& relations);

FgAbGroup direct_sum(const FgAbGroup& g, const FgAbGroup& h);
FgAbGroup power(const FgAbGroup& g, std::size_t k);
/// Dimension after tensoring with Q (or C).
std::size_t rationalized_rank(const FgAbGroup& g);

struct GroupElement {
  FgAbGroup group;
  std::vector<BigInt> coords;

  /// Throws MalformedInput on a length mismatch; torsion coordinates are reduced.
  static GroupElement make(FgAbGroup group, std::vector<BigInt> coords);
};

/// Least k >= 1 with k x = 0, or nullopt when x has infinite order.
std::optional<BigInt> element_order(const GroupElement& x);

class Homomorphism {
 public:
  /// Throws InvalidHomomorphism if the matrix has the wrong shape or fails
  /// to respect the source relations. Target torsion rows are reduced.
  static Homomorphism make(FgAbGroup source, FgAbGroup target, IntMatrix matrix);
  static Homomorphism identity(const FgAbGroup& g);
  static Homomorphism zero(const FgAbGroup& source, const FgAbGroup& target);

  const FgAbGroup& source() const { return source_; }
  const FgAbGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  std::vector<BigInt> apply(const std::vector<BigInt>& coords) const;

  friend bool operator==(const Homomorphism&, const Homomorphism&) = default;

 private:
  Homomorphism(FgAbGroup s, FgAbGroup t, IntMatrix m)
      : source_(std::move(s)), target_(std::move(t)), matrix_(std::move(m)) {}
  FgAbGroup source_;
  FgAbGroup target_;
  IntMatrix matrix_;
};

/// outer after inner.
Homomorphism compose(const Homomorphism& outer, const Homomorphism& inner);

/// A subgroup as an abstract group plus its inclusion into the ambient group.
struct Subgroup {
  FgAbGroup group;
  Homomorphism inclusion;
};

struct Quotient {
  FgAbGroup group;
  Homomorphism projection;
};

/// Subgroup of `ambient` generated by the columns of `generators`
/// (ambient coordinates).
Subgroup subgroup_generated(const FgAbGroup& ambient, const IntMatrix& generators);
/// Whether every column of `gens` lies in the subgroup spanned by `span`.
bool subgroup_contains(const FgAbGroup& ambient, const IntMatrix& span, const IntMatrix& gens);
/// Equality of two subgroups of the same ambient group by mutual inclusion.
bool same_subgroup(const Homomorphism& a, const Homomorphism& b);

Subgroup kernel(const Homomorphism& f);
Subgroup image(const Homomorphism& f);
FgAbGroup cokernel(const Homomorphism& f);
Quotient cokernel_projection(const Homomorphism& f);
bool is_isomorphism(const Homomorphism& f);

struct NodeExactness {
  std::size_t node;  // object index in the chain: 0 is the first source
  bool exact;
  FgAbGroup image;   // of the incoming map
  FgAbGroup kernel;  // of the outgoing map
};

struct ExactnessReport {
  std::vector<NodeExactness> nodes;  // interior nodes only
  std::optional<std::size_t> first_failure;

  bool exact() const { return !first_failure.has_value(); }
  std::vector<std::size_t> failing_nodes() const;
};

/// Checks image(f_i) == kernel(f_{i+1}) at every interior node.
/// Throws MalformedInput if consecutive maps do not compose.
ExactnessReport check_exact(const std::vector<Homomorphism>& maps);

}  // namespace ktower
