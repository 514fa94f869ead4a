#include "ktower/towers.hpp"

#include <map>
#include <mutex>

#include "ktower/error.hpp"

namespace ktower {

std::string to_string(TailKind kind) {
  switch (kind) {
    case TailKind::EventuallyConstant:
      return "constant";
    case TailKind::LevelwiseFinite:
      return "finite";
    case TailKind::General:
      return "general";
  }
  return "general";
}

// Shared between copies of a tower (with_bound keeps the cache: levels do
// not depend on the bound).
struct TowerMemo {
  std::mutex mu;
  std::map<std::size_t, FgAbGroup> groups;
  std::map<std::size_t, Homomorphism> maps;
};

namespace {

template <typename T, typename Fn>
T memoized(std::mutex& mu, std::map<std::size_t, T>& cache, std::size_t key, Fn&& compute) {
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  T value = compute();
  std::lock_guard lock(mu);
  cache.emplace(key, value);
  return value;
}

}  // namespace

template <Direction D>
Tower<D>::Tower(TowerSpec spec) : spec_(std::move(spec)) {
  if (!spec_.group_at) throw MalformedInput("tower '" + spec_.name + "': missing group generator");
  if (spec_.bound < spec_.base) {
    throw MalformedInput("tower '" + spec_.name + "': bound " + std::to_string(spec_.bound) +
                         " below base " + std::to_string(spec_.base));
  }
  if (spec_.tail.kind == TailKind::EventuallyConstant && spec_.tail.stable_from < spec_.base) {
    throw MalformedInput("tower '" + spec_.name + "': constant tail starts below the base");
  }
  if (spec_.stationary) {
    const Homomorphism phi = *spec_.stationary;
    if (!(phi.source() == phi.target()))
      throw MalformedInput("tower '" + spec_.name + "': stationary map must be an endomorphism");
    spec_.group_at = [g = phi.source()](std::size_t) { return g; };
    spec_.map_at = [phi](std::size_t) { return phi; };
  }
  // Wrap the generators in a cache; generator functions are pure, so the
  // first result at a level is the result.
  auto memo = std::make_shared<TowerMemo>();
  GroupFn raw_group = std::move(spec_.group_at);
  spec_.group_at = [memo, raw_group](std::size_t n) {
    return memoized(memo->mu, memo->groups, n, [&] { return raw_group(n); });
  };
  if (spec_.map_at) {
    MapFn raw_map = std::move(*spec_.map_at);
    spec_.map_at = [memo, raw_map](std::size_t n) {
      return memoized(memo->mu, memo->maps, n, [&] { return raw_map(n); });
    };
  }
}

template <Direction D>
void Tower<D>::check_level(std::size_t n) const {
  if (n < spec_.base) {
    throw MalformedInput("tower '" + spec_.name + "': level " + std::to_string(n) + " below base " +
                         std::to_string(spec_.base));
  }
  if (n > spec_.bound) {
    throw BoundExceeded("tower '" + spec_.name + "': level " + std::to_string(n) + " above bound " +
                        std::to_string(spec_.bound));
  }
}

template <Direction D>
FgAbGroup Tower<D>::group_at(std::size_t n) const {
  check_level(n);
  if (spec_.tail.kind == TailKind::EventuallyConstant && n > spec_.tail.stable_from)
    return spec_.group_at(spec_.tail.stable_from);
  FgAbGroup g = spec_.group_at(n);
  if (spec_.tail.kind == TailKind::LevelwiseFinite && !g.is_finite()) {
    throw MalformedInput("tower '" + spec_.name + "': level " + std::to_string(n) + " is " +
                         g.to_string() + " but the tail class is levelwise finite");
  }
  return g;
}

template <Direction D>
Homomorphism Tower<D>::map_at(std::size_t n) const {
  constexpr bool inverse = D == Direction::Inverse;
  if constexpr (inverse) {
    if (n <= spec_.base) {
      throw MalformedInput("tower '" + spec_.name + "': no map out of the base level");
    }
    check_level(n);
  } else {
    check_level(n);
    check_level(n + 1);
  }
  const std::size_t to = inverse ? n - 1 : n + 1;
  const std::size_t lower = inverse ? to : n;
  if (spec_.tail.kind == TailKind::EventuallyConstant && lower >= spec_.tail.stable_from)
    return Homomorphism::identity(group_at(spec_.tail.stable_from));
  if (!spec_.map_at) {
    throw Unresolved("tower '" + spec_.name + "': connecting maps are not specified");
  }
  Homomorphism f = (*spec_.map_at)(n);
  if (!(f.source() == group_at(n)) || !(f.target() == group_at(to))) {
    throw MalformedInput("tower '" + spec_.name + "': map at level " + std::to_string(n) + " goes " +
                         f.source().to_string() + " -> " + f.target().to_string() + ", expected " +
                         group_at(n).to_string() + " -> " + group_at(to).to_string());
  }
  return f;
}

template <Direction D>
bool Tower<D>::trivial_at(std::size_t n) const {
  check_level(n);
  if (spec_.tail.kind == TailKind::EventuallyConstant && n > spec_.tail.stable_from)
    return trivial_at(spec_.tail.stable_from);
  if (spec_.trivial_at) return spec_.trivial_at(n);
  return group_at(n).is_trivial();
}

template <Direction D>
Tower<D> Tower<D>::with_bound(std::size_t bound) const {
  if (bound < spec_.base) throw MalformedInput("bound below tower base");
  Tower copy = *this;
  copy.spec_.bound = bound;
  return copy;
}

template class Tower<Direction::Inverse>;
template class Tower<Direction::Direct>;

template <Direction D>
std::optional<std::size_t> cofinally_trivial_from(const Tower<D>& t) {
  std::optional<std::size_t> from;
  for (std::size_t n = t.bound() + 1; n-- > t.base();) {
    if (!t.trivial_at(n)) break;
    from = n;
  }
  return from;
}

template std::optional<std::size_t> cofinally_trivial_from(const InverseTower&);
template std::optional<std::size_t> cofinally_trivial_from(const DirectTower&);

bool LimitDescriptor::is_trivial() const { return std::holds_alternative<limit::Trivial>(value); }

bool LimitDescriptor::is_unproven() const { return std::holds_alternative<limit::Unproven>(value); }

std::optional<FgAbGroup> LimitDescriptor::exact_group() const {
  if (const auto* e = std::get_if<limit::ExactGroup>(&value)) return e->group;
  if (is_trivial()) return FgAbGroup::trivial();
  return std::nullopt;
}

std::string LimitDescriptor::kind() const {
  static const char* const names[] = {"ExactGroup", "Trivial", "ProfiniteNontrivial", "Unrepresentable",
                                      "Unproven"};
  return names[value.index()];
}

std::string Lim1Descriptor::kind() const {
  static const char* const names[] = {"Zero", "NonzeroUncomputed", "Unproven"};
  return names[value.index()];
}

const std::optional<KDegree>& KGradedGroup::degree(long i) const {
  return ((i % 2) + 2) % 2 == 0 ? even : odd;
}

namespace {

// Generators (in level coordinates) of im(level + k -> level), k = 0..depth.
std::vector<IntMatrix> image_generators(const InverseTower& t, std::size_t level, std::size_t depth) {
  if (level + depth > t.bound()) {
    throw BoundExceeded("image chain to level " + std::to_string(level + depth) + " exceeds bound " +
                        std::to_string(t.bound()));
  }
  if (!t.has_maps() && t.tail().kind != TailKind::EventuallyConstant) {
    throw Unresolved("tower '" + t.name() + "': connecting maps are not specified");
  }
  const FgAbGroup g = t.group_at(level);
  std::vector<IntMatrix> out;
  IntMatrix comp = IntMatrix::identity(g.generator_count());
  out.push_back(comp);
  for (std::size_t k = 1; k <= depth; ++k) {
    comp = comp * t.map_at(level + k).matrix();
    for (std::size_t i = 0; i < g.torsion.size(); ++i)
      for (std::size_t j = 0; j < comp.cols(); ++j)
        mpz_fdiv_r(comp(i, j).get_mpz_t(), comp(i, j).get_mpz_t(), g.torsion[i].get_mpz_t());
    out.push_back(comp);
  }
  return out;
}

// Chain at a level counts as stabilised within the bound when its last two
// images coincide (the chain is decreasing, so inclusion suffices).
bool chain_stable(const FgAbGroup& g, const std::vector<IntMatrix>& gens) {
  if (gens.size() < 2) return false;
  return subgroup_contains(g, gens.back(), gens[gens.size() - 2]);
}

}  // namespace

std::vector<FgAbGroup> image_chain(const InverseTower& t, std::size_t level, std::size_t depth) {
  const FgAbGroup g = t.group_at(level);
  std::vector<FgAbGroup> out;
  for (const auto& gens : image_generators(t, level, depth)) out.push_back(subgroup_generated(g, gens).group);
  return out;
}

MittagLefflerVerdict is_mittag_leffler(const InverseTower& t) {
  switch (t.tail().kind) {
    case TailKind::LevelwiseFinite:
      return ml::ForcedByRule{kRuleLevelwiseFinite};
    case TailKind::EventuallyConstant:
      return ml::ForcedByRule{kRuleEventuallyConstant};
    case TailKind::General:
      break;
  }
  for (std::size_t n = t.base(); n < t.bound(); ++n) {
    const std::size_t depth = t.bound() - n;
    const auto gens = image_generators(t, n, depth);
    if (!chain_stable(t.group_at(n), gens)) {
      return ml::FailedAt{n, "im(level " + std::to_string(n + depth - 1) + ") strictly contains im(level " +
                                 std::to_string(n + depth) + ") inside level " + std::to_string(n) +
                                 "; no stabilisation within bound " + std::to_string(t.bound())};
    }
  }
  return ml::VerifiedUpTo{t.bound()};
}

Lim1Descriptor lim1(const InverseTower& t) {
  if (t.tail().kind == TailKind::General && !t.has_maps()) return {lim1v::Unproven{t.bound()}};
  const MittagLefflerVerdict verdict = is_mittag_leffler(t);
  if (const auto* forced = std::get_if<ml::ForcedByRule>(&verdict)) {
    if (forced->rule == kRuleEventuallyConstant) return {lim1v::Zero{"eventual-constancy"}};
    return {lim1v::Zero{std::string("mittag-leffler: ") + forced->rule}};
  }
  if (const auto* failed = std::get_if<ml::FailedAt>(&verdict))
    return {lim1v::NonzeroUncomputed{failed->level, failed->witness}};
  // Stabilisation seen up to the bound says nothing about a general tail.
  return {lim1v::Unproven{t.bound()}};
}

namespace {

// Z with multiplication by f at every step: a compatible sequence has its
// bottom coordinate in the intersection of the f^k Z, which is 0 unless f is
// a unit, and the maps are injective (or zero), so the limit is 0 or Z.
std::optional<LimitDescriptor> stationary_rank_one_limit(const InverseTower& t) {
  const auto& phi = t.stationary();
  if (!phi || !(phi->source() == FgAbGroup::free(1))) return std::nullopt;
  const BigInt f = phi->matrix()(0, 0);
  if (abs(f) == 1) return LimitDescriptor{limit::ExactGroup{FgAbGroup::free(1), "stationary tower of units on Z"}};
  return LimitDescriptor{limit::ExactGroup{
      FgAbGroup::trivial(), "stationary tower Z <-(x" + f.get_str() + ")- Z: the intersection of the images is 0"}};
}

}  // namespace

LimitDescriptor inverse_limit(const InverseTower& t) {
  const std::size_t bound = t.bound();
  if (t.tail().kind == TailKind::EventuallyConstant) {
    const std::size_t n = t.tail().stable_from;
    return {limit::ExactGroup{t.group_at(n), "eventually constant from level " + std::to_string(n) +
                                                 " with identity maps"}};
  }
  if (auto n0 = cofinally_trivial_from(t)) {
    return {limit::Trivial{*n0, "cofinal triviality: every level in [" + std::to_string(*n0) + ", " +
                                    std::to_string(bound) + "] is the trivial group"}};
  }
  if (auto exact = stationary_rank_one_limit(t)) return *exact;
  if (t.tail().kind != TailKind::LevelwiseFinite)
    return {limit::Unproven{bound, "no structural rule applies to a general tower"}};
  if (!t.has_maps()) return {limit::Unproven{bound, "connecting maps are not specified"}};

  // Stable images S_n = im(G_bound -> G_n) for the lower half of the levels;
  // the maps carry S_{n+1} onto S_n, so equal orders mean isomorphisms.
  const std::size_t top = t.base() + (bound - t.base()) / 2;
  if (top < t.base() + 2) return {limit::Unproven{bound, "bound too small to compare stable images"}};
  std::vector<Subgroup> stable;
  std::vector<BigInt> orders;
  for (std::size_t n = t.base(); n <= top; ++n) {
    const FgAbGroup g = t.group_at(n);
    const auto gens = image_generators(t, n, bound - n);
    if (!chain_stable(g, gens)) {
      return {limit::Unproven{bound, "image chain at level " + std::to_string(n) +
                                         " does not stabilise within the bound"}};
    }
    stable.push_back(subgroup_generated(g, gens.back()));
    orders.push_back(*stable.back().group.order());
  }
  const std::size_t half = (top - t.base()) / 2;  // index into orders
  bool constant = true, increasing = true;
  for (std::size_t i = half; i + 1 < orders.size(); ++i) {
    if (orders[i] != orders[i + 1]) constant = false;
    if (!(orders[i] < orders[i + 1])) increasing = false;
  }
  if (constant) {
    std::size_t n1 = half;
    while (n1 > 0 && orders[n1 - 1] == orders[half]) --n1;
    return {limit::ExactGroup{stable[n1].group, "stable images carried isomorphically by the connecting maps "
                                                "on levels [" + std::to_string(t.base() + n1) + ", " +
                                                std::to_string(top) + "], certified to bound " +
                                                std::to_string(bound)}};
  }
  if (increasing) return {limit::ProfiniteNontrivial{t.base(), orders}};
  return {limit::Unproven{bound, "stable-image orders neither settle nor grow steadily within the bound"}};
}

LimitDescriptor direct_limit(const DirectTower& t) {
  const std::size_t bound = t.bound();
  if (t.tail().kind == TailKind::EventuallyConstant) {
    const std::size_t n = t.tail().stable_from;
    return {limit::ExactGroup{t.group_at(n), "eventually constant from level " + std::to_string(n) +
                                                 " with identity maps"}};
  }
  if (auto n0 = cofinally_trivial_from(t)) {
    return {limit::Trivial{*n0, "cofinal triviality: every level in [" + std::to_string(*n0) + ", " +
                                    std::to_string(bound) + "] is the trivial group"}};
  }
  if (!t.has_maps()) return {limit::Unproven{bound, "connecting maps are not specified"}};
  if (bound < t.base() + 2) return {limit::Unproven{bound, "bound too small"}};

  // Connecting maps isomorphisms over the upper half of the levels.
  const std::size_t half = t.base() + (bound - t.base()) / 2;
  std::size_t n1 = bound;
  while (n1 > t.base() && is_isomorphism(t.map_at(n1 - 1))) --n1;
  if (n1 <= half) {
    return {limit::ExactGroup{t.group_at(n1), "connecting maps are isomorphisms on levels [" +
                                                  std::to_string(n1) + ", " + std::to_string(bound) +
                                                  "], certified to bound"}};
  }

  if (t.tail().kind == TailKind::LevelwiseFinite) {
    // Composite G_n -> G_bound, built downward; zero means every element of
    // G_n has died by the bound.
    const FgAbGroup top = t.group_at(bound);
    IntMatrix comp = IntMatrix::identity(top.generator_count());
    bool all_die = true;
    for (std::size_t n = bound; n-- > t.base() && all_die;) {
      comp = comp * t.map_at(n).matrix();
      for (std::size_t i = 0; i < top.torsion.size(); ++i)
        for (std::size_t j = 0; j < comp.cols(); ++j)
          mpz_fdiv_r(comp(i, j).get_mpz_t(), comp(i, j).get_mpz_t(), top.torsion[i].get_mpz_t());
      all_die = comp.is_zero();
    }
    if (all_die) {
      return {limit::Trivial{std::nullopt, "every element of every level below " + std::to_string(bound) +
                                               " dies by level " + std::to_string(bound)}};
    }
  }
  return {limit::Unproven{bound, "no structural rule certifies the colimit within the bound"}};
}

KGradedGroup milnor_assemble(const GradedInverseTower& towers) {
  if (towers.even.base() != towers.odd.base() || towers.even.bound() != towers.odd.bound()) {
    throw MalformedInput("graded towers must share base and bound");
  }
  auto assemble = [](const InverseTower& same, const InverseTower& other) -> KDegree {
    // Degree i sits in 0 -> lim^1 K_{1-i} -> K_i -> lim K_i -> 0.
    Lim1Descriptor gate = lim1(other);
    LimitDescriptor lim = inverse_limit(same);
    if (gate.is_zero()) return lim;
    return LimitDescriptor{limit::Unrepresentable{
        "extension of lim by lim^1 not determined", std::make_shared<const LimitDescriptor>(std::move(lim)),
        std::make_shared<const Lim1Descriptor>(std::move(gate))}};
  };
  KGradedGroup out;
  out.even = assemble(towers.even, towers.odd);
  out.odd = assemble(towers.odd, towers.even);
  return out;
}

CyclicFamily CyclicFamily::identity(std::size_t first) {
  return CyclicFamily{"n -> Z/n", first, [](std::size_t n) { return BigInt(static_cast<unsigned long>(n)); }};
}

CyclicFamily CyclicFamily::constant(const BigInt& value, std::size_t first) {
  return CyclicFamily{"n -> Z/" + value.get_str(), first, [value](std::size_t) { return value; }};
}

namespace {

std::vector<BigInt> family_orders(const CyclicFamily& family, std::size_t last) {
  if (last < family.first) {
    throw OutOfRange("truncation index " + std::to_string(last) + " below the first index " +
                     std::to_string(family.first));
  }
  std::vector<BigInt> orders;
  for (std::size_t n = family.first; n <= last; ++n) {
    BigInt m = family.order(n);
    if (m < 1) throw OutOfRange("cyclic family order at " + std::to_string(n) + " must be >= 1");
    orders.push_back(std::move(m));
  }
  return orders;
}

}  // namespace

Presentation present_truncated_product(const CyclicFamily& family, std::size_t last) {
  const auto orders = family_orders(family, last);
  return present(IntMatrix::diagonal(orders.size(), orders.size(), orders));
}

FgAbGroup truncated_product(const CyclicFamily& family, std::size_t last) {
  return FgAbGroup::from_cyclic_orders(family_orders(family, last));
}

FgAbGroup CyclicFamilyDescriptor::truncate(std::size_t n) const { return truncated_product(family, n); }

std::optional<TorsionWitness> unbounded_torsion_witness(const CyclicFamily& family, std::size_t bound) {
  TorsionWitness w;
  for (std::size_t n = family.first; n <= bound; ++n) {
    const Presentation p = present_truncated_product(family, n);
    const std::vector<BigInt> ones(n - family.first + 1, BigInt(1));
    const BigInt ord = *element_order(GroupElement::make(p.group, p.transport(ones)));
    if (w.orders.empty() || w.orders.back() < ord) {
      w.levels.push_back(n);
      w.orders.push_back(ord);
    }
  }
  if (w.orders.size() < 2) return std::nullopt;
  return w;
}

namespace builtin {

InverseTower z_times(const BigInt& factor, std::size_t bound, std::size_t base) {
  TowerSpec s;
  s.name = "z-times-" + factor.get_str();
  s.base = base;
  IntMatrix m(1, 1);
  m(0, 0) = factor;
  s.stationary = Homomorphism::make(FgAbGroup::free(1), FgAbGroup::free(1), m);
  s.group_at = [](std::size_t) { return FgAbGroup::free(1); };
  s.tail = TailClass::general();
  s.bound = bound;
  return InverseTower(std::move(s));
}

namespace {

BigInt prime_power(const BigInt& p, std::size_t n) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), p.get_mpz_t(), n);
  return out;
}

void require_modulus(const BigInt& p) {
  if (p < 2) throw OutOfRange("modulus p must be >= 2, got " + p.get_str());
}

}  // namespace

InverseTower p_adic(const BigInt& p, std::size_t bound) {
  require_modulus(p);
  TowerSpec s;
  s.name = "p-adic-" + p.get_str();
  s.base = 1;
  s.group_at = [p](std::size_t n) { return FgAbGroup::cyclic(prime_power(p, n)); };
  s.map_at = [p](std::size_t n) {
    return Homomorphism::make(FgAbGroup::cyclic(prime_power(p, n)), FgAbGroup::cyclic(prime_power(p, n - 1)),
                              IntMatrix{{1}});
  };
  s.tail = TailClass::levelwise_finite();
  s.bound = bound;
  return InverseTower(std::move(s));
}

InverseTower constant_inverse(const FgAbGroup& g, std::size_t bound) {
  TowerSpec s;
  s.name = "constant";
  s.group_at = [g](std::size_t) { return g; };
  s.map_at = [g](std::size_t) { return Homomorphism::identity(g); };
  s.tail = TailClass::eventually_constant(0);
  s.bound = bound;
  return InverseTower(std::move(s));
}

DirectTower constant_direct(const FgAbGroup& g, std::size_t bound) {
  TowerSpec s;
  s.name = "constant";
  s.group_at = [g](std::size_t) { return g; };
  s.map_at = [g](std::size_t) { return Homomorphism::identity(g); };
  s.tail = TailClass::eventually_constant(0);
  s.bound = bound;
  return DirectTower(std::move(s));
}

namespace {

// Coordinate map between truncations [first, from] and [first, to] of the
// family: projection when to < from, inclusion when to > from.
Homomorphism truncation_map(const CyclicFamily& family, std::size_t from, std::size_t to) {
  const Presentation src = present_truncated_product(family, from);
  const Presentation dst = present_truncated_product(family, to);
  const std::size_t ks = from - family.first + 1;
  const std::size_t kd = to - family.first + 1;
  IntMatrix coord(kd, ks);
  for (std::size_t i = 0; i < std::min(ks, kd); ++i) coord(i, i) = 1;
  return Homomorphism::make(src.group, dst.group, dst.to_canonical * coord * src.from_canonical);
}

}  // namespace

InverseTower product_tower(const CyclicFamily& family, std::size_t bound) {
  TowerSpec s;
  s.name = "product " + family.name;
  s.base = family.first;
  s.group_at = [family](std::size_t n) { return truncated_product(family, n); };
  s.map_at = [family](std::size_t n) { return truncation_map(family, n, n - 1); };
  s.tail = TailClass::levelwise_finite();
  s.bound = bound;
  return InverseTower(std::move(s));
}

DirectTower sum_tower(const CyclicFamily& family, std::size_t bound) {
  TowerSpec s;
  s.name = "sum " + family.name;
  s.base = family.first;
  s.group_at = [family](std::size_t n) { return truncated_product(family, n); };
  s.map_at = [family](std::size_t n) { return truncation_map(family, n, n + 1); };
  s.tail = TailClass::levelwise_finite();
  s.bound = bound;
  return DirectTower(std::move(s));
}

DirectTower pruefer(const BigInt& p, std::size_t bound) {
  require_modulus(p);
  TowerSpec s;
  s.name = "pruefer-" + p.get_str();
  s.base = 1;
  s.group_at = [p](std::size_t n) { return FgAbGroup::cyclic(prime_power(p, n)); };
  s.map_at = [p](std::size_t n) {
    IntMatrix m(1, 1);
    m(0, 0) = p;
    return Homomorphism::make(FgAbGroup::cyclic(prime_power(p, n)), FgAbGroup::cyclic(prime_power(p, n + 1)), m);
  };
  s.tail = TailClass::levelwise_finite();
  s.bound = bound;
  return DirectTower(std::move(s));
}

DirectTower zero_maps(const FgAbGroup& g, std::size_t bound) {
  TowerSpec s;
  s.name = "zero-maps";
  s.group_at = [g](std::size_t) { return g; };
  s.map_at = [g](std::size_t) { return Homomorphism::zero(g, g); };
  s.tail = g.is_finite() ? TailClass::levelwise_finite() : TailClass::general();
  s.bound = bound;
  return DirectTower(std::move(s));
}

}  // namespace builtin

}  // namespace ktower
