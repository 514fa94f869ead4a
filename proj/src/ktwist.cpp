#include "ktower/ktwist.hpp"

#include <limits>

#include "ktower/error.hpp"

namespace ktower {

TwistedSpace TwistedSpace::su(std::size_t n, std::uint64_t level) {
  if (n < 2) throw OutOfRange("SU(n) needs n >= 2, got n = " + std::to_string(n));
  if (level < 1) throw OutOfRange("twist level must be >= 1 (untwisted K-theory is not modelled)");
  return TwistedSpace(SUFinite{n, level});
}

TwistedSpace TwistedSpace::su_infinite(std::uint64_t level) {
  if (level < 1) throw OutOfRange("twist level must be >= 1 (untwisted K-theory is not modelled)");
  return TwistedSpace(SUInfinite{level});
}

TwistedSpace TwistedSpace::sphere3(const BigInt& twist) {
  if (twist < 1) throw OutOfRange("S^3 twist must be >= 1, got " + twist.get_str());
  return TwistedSpace(Sphere3{twist});
}

TwistedSpace TwistedSpace::sphere_union(std::optional<CyclicFamily> twists) {
  CyclicFamily family = twists ? std::move(*twists) : CyclicFamily::identity(1);
  if (family.first < 1) throw OutOfRange("component indices start at 1");
  return TwistedSpace(SphereDisjointUnion{std::move(family)});
}

std::string TwistedSpace::describe() const {
  struct {
    std::string operator()(const SUFinite& s) const {
      return "(SU(" + std::to_string(s.n) + "), " + std::to_string(s.level) + ")";
    }
    std::string operator()(const SUInfinite& s) const {
      return "(SU(inf), " + std::to_string(s.level) + ")";
    }
    std::string operator()(const Sphere3& s) const { return "(S^3, " + s.twist.get_str() + ")"; }
    std::string operator()(const SphereDisjointUnion& s) const {
      return "(disjoint union of S^3, " + s.twist_of_component.name + ")";
    }
  } visitor;
  return std::visit(visitor, value_);
}

BigInt su_cyclic_order(std::size_t n, std::uint64_t level) {
  if (n < 2) throw OutOfRange("c(n, level) needs n >= 2, got n = " + std::to_string(n));
  if (level < 1) throw OutOfRange("c(n, level) needs level >= 1");
  if (level > std::numeric_limits<unsigned long>::max() - n)
    throw OutOfRange("level too large for binomial evaluation");
  BigInt g = 0;
  BigInt binom;
  for (std::size_t i = 1; i + 1 <= n; ++i) {
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(level + i), static_cast<unsigned long>(i));
    binom -= 1;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), binom.get_mpz_t());
    if (g == 1) break;  // gcd can only stay at 1
  }
  return g;
}

FgAbGroup su_twisted_total(std::size_t n, std::uint64_t level) {
  const BigInt c = su_cyclic_order(n, level);
  if (c == 1) return FgAbGroup::trivial();
  if (n - 1 >= 63) throw OutOfRange("(Z/c)^(2^(n-1)) is too large to materialise for n = " + std::to_string(n));
  return power(FgAbGroup::cyclic(c), std::size_t{1} << (n - 1));
}

namespace {

const char* const kSuFormula =
    "K^*(SU(n), l) = (Z/c(n,l))^(2^(n-1)) as a total group, c(n,l) = gcd{C(l+i,i) - 1 : 1 <= i <= n-1}";

LevelPredicate su_trivial_probe(std::uint64_t level) {
  return [level](std::size_t n) { return su_cyclic_order(n, level) == 1; };
}

// One parity of the level group: a summand of the total, trivial whenever
// the total is. Otherwise the split is not determined.
GroupFn su_degree_group(std::uint64_t level, int parity) {
  return [level, parity](std::size_t n) -> FgAbGroup {
    const BigInt c = su_cyclic_order(n, level);
    if (c == 1) return FgAbGroup::trivial();
    throw Unresolved("degree " + std::to_string(parity) + " part of (Z/" + c.get_str() + ")^(2^" +
                     std::to_string(n - 1) + ") is not determined (only the total is known)");
  };
}

TowerSpec su_spec(std::string name, std::uint64_t level, std::size_t bound, GroupFn group) {
  TowerSpec s;
  s.name = std::move(name);
  s.base = 2;
  s.group_at = std::move(group);
  s.tail = TailClass::levelwise_finite();
  s.bound = bound;
  s.trivial_at = su_trivial_probe(level);
  return s;
}

InverseTower su_k_degree_tower(std::uint64_t level, int parity, std::size_t bound) {
  return InverseTower(su_spec("su-k degree " + std::to_string(parity) + " level " + std::to_string(level), level,
                              bound, su_degree_group(level, parity)));
}

// Both degrees come from the same probe; the total is trivial exactly when
// both are.
KDegree combine_total(const KDegree& even, const KDegree& odd, std::size_t bound) {
  const auto* e = std::get_if<LimitDescriptor>(&even);
  const auto* o = std::get_if<LimitDescriptor>(&odd);
  if (e && o && e->is_trivial() && o->is_trivial()) {
    const auto& te = std::get<limit::Trivial>(e->value);
    const auto& to = std::get<limit::Trivial>(o->value);
    std::optional<std::size_t> from = te.from_level;
    if (from && to.from_level) from = std::max(*from, *to.from_level);
    return LimitDescriptor{limit::Trivial{from, "both degrees trivial"}};
  }
  return LimitDescriptor{limit::Unproven{bound, "total not determined: a degree is not certified"}};
}

void require_su_level(std::uint64_t level) {
  if (level < 1) throw OutOfRange("twist level must be >= 1");
}

}  // namespace

InverseTower su_k_total_tower(std::uint64_t level, std::size_t bound) {
  require_su_level(level);
  return InverseTower(su_spec("su-k level " + std::to_string(level), level, bound,
                              [level](std::size_t n) { return su_twisted_total(n, level); }));
}

GradedInverseTower su_k_graded_tower(std::uint64_t level, std::size_t bound) {
  require_su_level(level);
  return GradedInverseTower{su_k_degree_tower(level, 0, bound), su_k_degree_tower(level, 1, bound)};
}

DirectTower su_khomology_total_tower(std::uint64_t level, std::size_t bound) {
  require_su_level(level);
  return DirectTower(su_spec("su-khom level " + std::to_string(level), level, bound,
                             [level](std::size_t n) { return su_twisted_total(n, level); }));
}

DirectTower su_khomology_degree_tower(std::uint64_t level, int parity, std::size_t bound) {
  require_su_level(level);
  return DirectTower(su_spec("su-khom degree " + std::to_string(parity) + " level " + std::to_string(level),
                             level, bound, su_degree_group(level, parity)));
}

KResult twisted_k(const TwistedSpace& space, std::size_t bound) {
  KResult out;
  const auto& v = space.value();
  if (const auto* s = std::get_if<SUFinite>(&v)) {
    out.graded.total = su_twisted_total(s->n, s->level);
    out.provenance.push_back(kSuFormula);
    out.provenance.push_back("parity split of the total is not determined");
  } else if (const auto* s = std::get_if<SUInfinite>(&v)) {
    out.graded = milnor_assemble(su_k_graded_tower(s->level, bound));
    out.graded.total = combine_total(*out.graded.even, *out.graded.odd, bound);
    out.provenance.push_back("CT(SU(inf), P) is the inverse limit of CT(SU(n), P_n)");
    out.provenance.push_back("Milnor sequence: 0 -> lim^1 K_{1-i}(A_n) -> K_i(lim A_n) -> lim K_i(A_n) -> 0");
    out.provenance.push_back("lim^1 = 0: towers of finite groups satisfy Mittag-Leffler");
    out.provenance.push_back(kSuFormula);
    out.provenance.push_back("cofinal triviality: c(n0, l) = 1 and c(n, l) divides c(n0, l) for n >= n0");
  } else if (const auto* s = std::get_if<Sphere3>(&v)) {
    out.graded.even = FgAbGroup::trivial();
    out.graded.odd = FgAbGroup::cyclic(s->twist);
    out.provenance.push_back("K_0(CT(S^3, m)) = 0, K_1(CT(S^3, m)) = Z/m");
  } else {
    const auto& u = std::get<SphereDisjointUnion>(v);
    out.graded.even = FgAbGroup::trivial();
    out.graded.odd = CyclicFamilyDescriptor{u.twist_of_component, CyclicFamilyDescriptor::Kind::Product};
    out.provenance.push_back("K_0(CT(S^3, m)) = 0, K_1(CT(S^3, m)) = Z/m");
    out.provenance.push_back("countable products are preserved: K_*(prod A_n) = prod K_*(A_n)");
  }
  return out;
}

KResult twisted_khomology(const TwistedSpace& space, std::size_t bound) {
  KResult out;
  const auto& v = space.value();
  if (const auto* s = std::get_if<SUFinite>(&v)) {
    out.graded.total = su_twisted_total(s->n, s->level);
    out.provenance.push_back("K_*(SU(n), l) = (Z/c(n,l))^(2^(n-1)) as a total group");
    out.provenance.push_back("parity split of the total is not determined");
  } else if (const auto* s = std::get_if<SUInfinite>(&v)) {
    out.graded.even = direct_limit(su_khomology_degree_tower(s->level, 0, bound));
    out.graded.odd = direct_limit(su_khomology_degree_tower(s->level, 1, bound));
    out.graded.total = combine_total(*out.graded.even, *out.graded.odd, bound);
    out.provenance.push_back("contravariant continuity: K^*(lim A_n) = colim K^*(A_n)");
    out.provenance.push_back("K_*(SU(n), l) = (Z/c(n,l))^(2^(n-1)) as a total group");
    out.provenance.push_back("cofinal triviality: c(n0, l) = 1 and c(n, l) divides c(n0, l) for n >= n0");
  } else if (const auto* s = std::get_if<Sphere3>(&v)) {
    out.graded.total = FgAbGroup::cyclic(s->twist);
    out.provenance.push_back("K-homology of CT(S^3, m) is Z/m as a total group");
  } else {
    const auto& u = std::get<SphereDisjointUnion>(v);
    out.graded.total = CyclicFamilyDescriptor{u.twist_of_component, CyclicFamilyDescriptor::Kind::Sum};
    out.provenance.push_back("K^*(prod A_n) = direct sum of K^*(A_n) for nuclear separable A_n");
  }
  return out;
}

KResult stabilize(const KResult& k) {
  KResult out = k;
  out.provenance.push_back("C*-stability: K_i(A (x) K) = K_i(A)");
  return out;
}

DivisibilityTable divisibility_table(std::uint64_t level, std::size_t n_max) {
  if (n_max < 2) throw OutOfRange("n_max must be >= 2");
  DivisibilityTable t{level, n_max, {}, true, std::nullopt};
  for (std::size_t n = 2; n <= n_max; ++n) {
    t.values.push_back(su_cyclic_order(n, level));
    if (!t.first_one && t.values.back() == 1) t.first_one = n;
  }
  for (std::size_t n = 0; n < t.values.size() && t.chain_ok; ++n)
    for (std::size_t m = 0; m <= n; ++m)
      if (!mpz_divisible_p(t.values[m].get_mpz_t(), t.values[n].get_mpz_t())) {
        t.chain_ok = false;
        break;
      }
  return t;
}

namespace {

std::size_t degree_rank(const KDegree& d) {
  if (const auto* g = std::get_if<FgAbGroup>(&d)) return rationalized_rank(*g);
  if (const auto* l = std::get_if<LimitDescriptor>(&d)) {
    if (auto g = l->exact_group()) return rationalized_rank(*g);
    throw Unresolved("cannot rationalise a " + l->kind() + " limit descriptor");
  }
  throw Unresolved("cannot rationalise a countable product or sum of cyclic groups");
}

}  // namespace

std::size_t rationalized_rank(const KResult& k) {
  if (k.graded.total) return degree_rank(*k.graded.total);
  if (k.graded.even && k.graded.odd) return degree_rank(*k.graded.even) + degree_rank(*k.graded.odd);
  throw Unresolved("K result carries neither a total nor both degrees");
}

}  // namespace ktower
