#include "ktower/cyclic.hpp"

#include <algorithm>

#include "ktower/error.hpp"

namespace ktower {

ExteriorAlgebra ExteriorAlgebra::make(std::vector<std::uint64_t> generator_degrees) {
  for (std::size_t i = 0; i < generator_degrees.size(); ++i) {
    if (generator_degrees[i] % 2 == 0)
      throw MalformedInput("exterior generator degree " + std::to_string(generator_degrees[i]) + " is not odd");
    if (i > 0 && generator_degrees[i] <= generator_degrees[i - 1])
      throw MalformedInput("exterior generator degrees must be strictly increasing");
  }
  return ExteriorAlgebra(std::move(generator_degrees));
}

ExteriorAlgebra su_de_rham(std::size_t n) {
  if (n < 2) throw OutOfRange("SU(n) needs n >= 2, got n = " + std::to_string(n));
  std::vector<std::uint64_t> degrees;
  for (std::size_t i = 2; i <= n; ++i) degrees.push_back(2 * i - 1);
  return ExteriorAlgebra::make(std::move(degrees));
}

GradedDims graded_dims(const ExteriorAlgebra& a) {
  if (a.generator_count() > 63)
    throw OutOfRange("graded dimensions of " + std::to_string(a.generator_count()) + " generators overflow");
  GradedDims d{1, 0};
  for (std::uint64_t deg : a.generator_degrees()) {
    // Multiplying by a generator of degree deg shifts parity by deg.
    if (deg % 2 == 1)
      d = {d.even + d.odd, d.odd + d.even};
    else
      d = {2 * d.even, 2 * d.odd};
  }
  return d;
}

Restriction restriction(std::size_t n, std::size_t m) {
  if (m < 2 || m >= n)
    throw OutOfRange("restriction SU(" + std::to_string(n) + ") -> SU(" + std::to_string(m) + ") needs 2 <= m < n");
  const ExteriorAlgebra source = su_de_rham(n);
  const ExteriorAlgebra target = su_de_rham(m);
  Restriction r{n, m, {}, graded_dims(source), {}, graded_dims(target), false, 0};
  std::vector<std::uint64_t> hit;
  for (std::uint64_t deg : source.generator_degrees()) {
    const auto& tg = target.generator_degrees();
    auto it = std::find(tg.begin(), tg.end(), deg);
    if (it == tg.end()) {
      r.generator_images.push_back(-1);
    } else {
      r.generator_images.push_back(static_cast<long>(it - tg.begin()));
      hit.push_back(deg);
    }
  }
  r.image_dims = graded_dims(ExteriorAlgebra::make(std::move(hit)));
  r.surjective = r.image_dims == r.target_dims;
  r.kernel_dim = r.source_dims.total() - r.image_dims.total();
  return r;
}

Restriction restriction(std::size_t n) {
  if (n < 3) throw OutOfRange("restriction needs n >= 3, got n = " + std::to_string(n));
  return restriction(n, n - 1);
}

HpInverseSystem hp_su_infinity(std::size_t truncation) {
  if (truncation < 2) throw OutOfRange("truncation must be >= 2");
  HpInverseSystem s{truncation, {}, {}, {}, Lim1Descriptor{lim1v::Zero{}}, false, {}};
  for (std::size_t n = 2; n <= truncation; ++n) {
    s.levels.push_back(n);
    s.dims.push_back(graded_dims(su_de_rham(n)));
    if (n > 2) s.restriction_surjective.push_back(restriction(n).surjective);
  }
  const bool all_surjective =
      std::all_of(s.restriction_surjective.begin(), s.restriction_surjective.end(), [](bool b) { return b; });
  if (all_surjective)
    s.lim1 = Lim1Descriptor{lim1v::Zero{"mittag-leffler: finite-dimensional levels, surjective restrictions"}};
  else
    s.lim1 = Lim1Descriptor{lim1v::Unproven{truncation}};
  s.limit_finite_dimensional = false;
  s.limit_note = "formal inverse limit of exterior algebras on x_3, x_5, ...; dimensions 2^(n-2) grow without bound";
  return s;
}

ChernCheck chern_rank_check(const KResult& k, std::uint64_t hp_total_dim) {
  ChernCheck c{false, rationalized_rank(k), hp_total_dim, {}};
  c.pass = c.k_rank == hp_total_dim;
  c.details = "rank K (x) C = " + std::to_string(c.k_rank) + ", dim HP = " + std::to_string(hp_total_dim) +
              (c.pass ? "" : ": rank mismatch");
  return c;
}

TwistedHP twisted_hp(const TwistedSpace& space, std::size_t bound) {
  const auto& v = space.value();
  if (!std::holds_alternative<SUFinite>(v) && !std::holds_alternative<SUInfinite>(v))
    throw MalformedInput("twisted HP is only available for SU(n) and SU(inf), not " + space.describe());
  const KResult k = twisted_k(space, bound);
  const std::size_t rank = rationalized_rank(k);
  if (rank != 0) throw Unresolved("twisted K has positive rank; the parity split of HP is not determined");
  TwistedHP out{{0, 0}, {}};
  out.provenance.push_back("twisted K of " + space.describe() + " is pure torsion");
  out.provenance.push_back("K (x) C = 0");
  if (std::holds_alternative<SUInfinite>(v))
    out.provenance.push_back("Milnor lim^1 sequence: every level has HP = 0, so the limit does too");
  out.provenance.push_back("Chern character is an isomorphism after (x) C, so HP = 0");
  return out;
}

}  // namespace ktower
