#pragma once

// Periodic cyclic homology of SU(n) and SU(infinity) at the level of graded
// dimensions, and the rank-level Chern character check.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ktower/ktwist.hpp"

namespace ktower {

/// Exterior algebra over C on odd-degree generators.
class ExteriorAlgebra {
 public:
  /// Throws MalformedInput unless the degrees are odd and strictly increasing.
  static ExteriorAlgebra make(std::vector<std::uint64_t> generator_degrees);

  const std::vector<std::uint64_t>& generator_degrees() const { return degrees_; }
  std::size_t generator_count() const { return degrees_.size(); }
  bool operator==(const ExteriorAlgebra&) const = default;

 private:
  explicit ExteriorAlgebra(std::vector<std::uint64_t> d) : degrees_(std::move(d)) {}
  std::vector<std::uint64_t> degrees_;
};

struct GradedDims {
  std::uint64_t even = 0;
  std::uint64_t odd = 0;

  std::uint64_t total() const { return even + odd; }
  bool operator==(const GradedDims&) const = default;
};

/// de Rham cohomology of SU(n): generators in degrees 3, 5, ..., 2n - 1.
ExteriorAlgebra su_de_rham(std::size_t n);

/// Monomials counted by parity of total degree. Throws OutOfRange above 63
/// generators.
GradedDims graded_dims(const ExteriorAlgebra& a);

/// The map SU(n) -> SU(m) in cohomology, m < n: the generators common to
/// both are kept and the rest are sent to zero.
struct Restriction {
  std::size_t from_n;
  std::size_t to_n;
  /// Image of each source generator: index into the target generators, or -1.
  std::vector<long> generator_images;
  GradedDims source_dims;
  GradedDims image_dims;
  GradedDims target_dims;
  bool surjective;
  std::uint64_t kernel_dim;
};

/// SU(n) -> SU(n - 1); throws OutOfRange for n < 3.
Restriction restriction(std::size_t n);
/// Composite SU(n) -> SU(m); throws OutOfRange unless 2 <= m < n.
Restriction restriction(std::size_t n, std::size_t m);

struct HpInverseSystem {
  std::size_t truncation;
  std::vector<std::size_t> levels;  // 2..truncation
  std::vector<GradedDims> dims;
  std::vector<bool> restriction_surjective;  // level k + 1 -> level k
  Lim1Descriptor lim1;
  bool limit_finite_dimensional;
  std::string limit_note;
};

/// HP of SU(infinity) as the formal inverse system of the SU(n) levels.
/// Throws OutOfRange for truncation < 2.
HpInverseSystem hp_su_infinity(std::size_t truncation);

struct ChernCheck {
  bool pass;
  std::size_t k_rank;
  std::uint64_t hp_dim;
  std::string details;
};

/// Rank of K after tensoring with C against the HP dimension. Throws
/// Unresolved when a K degree is only known as a descriptor.
ChernCheck chern_rank_check(const KResult& k, std::uint64_t hp_total_dim);

struct TwistedHP {
  GradedDims dims;
  std::vector<std::string> provenance;
};

/// Twisted HP of (SU(n), level) and (SU(infinity), level), derived from the
/// torsion of twisted K and the Chern isomorphism. Other spaces throw
/// MalformedInput.
TwistedHP twisted_hp(const TwistedSpace& space, std::size_t bound = kDefaultBound);

}  // namespace ktower
