#include <doctest.h>

#include <thread>

#include "ktower/error.hpp"
#include "ktower/towers.hpp"
#include "oracles.hpp"

using namespace ktower;

namespace {

std::vector<BigInt> ints(std::initializer_list<long> xs) { return {xs.begin(), xs.end()}; }

template <class T>
const T& as(const LimitDescriptor& d) {
  REQUIRE(std::holds_alternative<T>(d.value));
  return std::get<T>(d.value);
}

// Finite levels that vanish from level 5 on, with no maps given.
InverseTower vanishing_tower(std::size_t bound = 20) {
  TowerSpec s;
  s.name = "vanishing";
  s.base = 0;
  s.group_at = [](std::size_t n) { return n < 5 ? FgAbGroup::cyclic(3) : FgAbGroup::trivial(); };
  s.tail = TailClass::levelwise_finite();
  s.bound = bound;
  return InverseTower(std::move(s));
}

}  // namespace

TEST_CASE("towers validate their contracts") {
  TowerSpec s;
  s.name = "broken";
  CHECK_THROWS_AS(InverseTower{s}, MalformedInput);
  s.group_at = [](std::size_t) { return FgAbGroup::free(1); };
  s.base = 5;
  s.bound = 3;
  CHECK_THROWS_AS(InverseTower{s}, MalformedInput);
  s.bound = 10;
  s.tail = TailClass::levelwise_finite();
  const InverseTower t(s);
  CHECK_THROWS_AS(t.group_at(6), MalformedInput);  // free level in a levelwise-finite tower
  CHECK_THROWS_AS(t.group_at(11), BoundExceeded);
  CHECK_THROWS_AS(t.map_at(6), Unresolved);
}

TEST_CASE("eventually constant towers repeat with identity maps") {
  const FgAbGroup g = FgAbGroup::make(1, ints({2}));
  const InverseTower t = builtin::constant_inverse(g, 12);
  CHECK(t.group_at(11) == g);
  CHECK(t.map_at(7) == Homomorphism::identity(g));
}

TEST_CASE("image chains") {
  const FgAbGroup g = FgAbGroup::make(0, ints({2, 6}));
  const auto chain = image_chain(builtin::constant_inverse(g, 10), 0, 4);
  CHECK(chain == std::vector<FgAbGroup>(5, g));

  const auto padic = image_chain(builtin::p_adic(2, 10), 1, 5);
  CHECK(padic == std::vector<FgAbGroup>(6, FgAbGroup::cyclic(2)));

  const auto ztimes = image_chain(builtin::z_times(2, 10), 0, 5);
  CHECK(ztimes == std::vector<FgAbGroup>(6, FgAbGroup::free(1)));

  CHECK_THROWS_AS(image_chain(builtin::z_times(2, 10), 5, 6), BoundExceeded);
  CHECK_THROWS_AS(image_chain(vanishing_tower(), 0, 1), Unresolved);
}

TEST_CASE("Mittag-Leffler verdicts") {
  auto ml1 = is_mittag_leffler(builtin::p_adic(3, 12));
  REQUIRE(std::holds_alternative<ml::ForcedByRule>(ml1));
  CHECK(std::get<ml::ForcedByRule>(ml1).rule == kRuleLevelwiseFinite);

  auto ml2 = is_mittag_leffler(builtin::z_times(2, 12));
  REQUIRE(std::holds_alternative<ml::FailedAt>(ml2));
  CHECK(std::get<ml::FailedAt>(ml2).level == 0);

  auto ml3 = is_mittag_leffler(builtin::constant_inverse(FgAbGroup::free(2), 12));
  REQUIRE(std::holds_alternative<ml::ForcedByRule>(ml3));
  CHECK(std::get<ml::ForcedByRule>(ml3).rule == kRuleEventuallyConstant);

  // Units on Z: every image is all of Z, verified to the bound.
  auto ml4 = is_mittag_leffler(builtin::z_times(-1, 12));
  REQUIRE(std::holds_alternative<ml::VerifiedUpTo>(ml4));
  CHECK(std::get<ml::VerifiedUpTo>(ml4).bound == 12);
}

TEST_CASE("lim1 verdicts") {
  const Lim1Descriptor a = lim1(builtin::p_adic(2, 12));
  REQUIRE(a.is_zero());
  CHECK(std::get<lim1v::Zero>(a.value).rule.find("mittag-leffler") != std::string::npos);

  const Lim1Descriptor b = lim1(builtin::constant_inverse(FgAbGroup::free(1), 12));
  REQUIRE(b.is_zero());
  CHECK(std::get<lim1v::Zero>(b.value).rule == "eventual-constancy");

  const Lim1Descriptor c = lim1(builtin::z_times(2, 10));
  REQUIRE(std::holds_alternative<lim1v::NonzeroUncomputed>(c.value));
  CHECK(std::get<lim1v::NonzeroUncomputed>(c.value).witness_level == 0);
}

TEST_CASE("every Zero lim1 names a rule whose premise holds") {
  const std::vector<InverseTower> towers{builtin::p_adic(5, 10), builtin::constant_inverse(FgAbGroup::cyclic(4), 10),
                                         builtin::product_tower(CyclicFamily::identity(), 10), vanishing_tower()};
  for (const auto& t : towers) {
    const Lim1Descriptor d = lim1(t);
    REQUIRE(d.is_zero());
    const std::string rule = std::get<lim1v::Zero>(d.value).rule;
    if (rule == "eventual-constancy") {
      CHECK(t.tail().kind == TailKind::EventuallyConstant);
    } else {
      CHECK(t.tail().kind == TailKind::LevelwiseFinite);
      for (std::size_t n = t.base(); n <= t.bound(); ++n) CHECK(t.group_at(n).is_finite());
    }
  }
}

TEST_CASE("inverse limits") {
  const FgAbGroup g = FgAbGroup::make(2, ints({3}));
  CHECK(as<limit::ExactGroup>(inverse_limit(builtin::constant_inverse(g, 10))).group == g);

  const LimitDescriptor vanishing = inverse_limit(vanishing_tower());
  const auto& triv = as<limit::Trivial>(vanishing);
  REQUIRE(triv.from_level);
  CHECK(*triv.from_level == 5);
  const InverseTower v = vanishing_tower();
  for (std::size_t n = *triv.from_level; n <= v.bound(); ++n) CHECK(v.group_at(n).is_trivial());

  const LimitDescriptor padic = inverse_limit(builtin::p_adic(2, 16));
  const auto& pro = as<limit::ProfiniteNontrivial>(padic);
  for (std::size_t i = 0; i < pro.stable_orders.size(); ++i) {
    BigInt expected = 1;
    for (std::size_t k = 0; k < pro.first_level + i; ++k) expected *= 2;
    CHECK(pro.stable_orders[i] == expected);
  }

  CHECK(as<limit::ExactGroup>(inverse_limit(builtin::z_times(2, 10))).group.is_trivial());
  CHECK(as<limit::ExactGroup>(inverse_limit(builtin::z_times(-1, 10))).group == FgAbGroup::free(1));
}

TEST_CASE("inverse limit of a finite tower whose images settle") {
  // Z/2 + Z/4 at every level with (a, b) -> (a, 2b): two steps kill the
  // Z/4 coordinate and leave Z/2.
  TowerSpec s;
  s.name = "settling";
  const FgAbGroup g = FgAbGroup::make(0, ints({2, 4}));
  s.group_at = [g](std::size_t) { return g; };
  s.map_at = [g](std::size_t) { return Homomorphism::make(g, g, IntMatrix{{1, 0}, {0, 2}}); };
  s.tail = TailClass::levelwise_finite();
  s.bound = 16;
  const LimitDescriptor settled = inverse_limit(InverseTower(s));
  const auto& e = as<limit::ExactGroup>(settled);
  CHECK(e.group == FgAbGroup::cyclic(2));
  CHECK_FALSE(e.note.empty());
}

TEST_CASE("direct limits") {
  const FgAbGroup g = FgAbGroup::make(1, ints({5}));
  CHECK(as<limit::ExactGroup>(direct_limit(builtin::constant_direct(g, 10))).group == g);

  const auto zm = direct_limit(builtin::zero_maps(FgAbGroup::cyclic(6), 10));
  CHECK(zm.is_trivial());
  CHECK_FALSE(as<limit::Trivial>(zm).from_level.has_value());

  CHECK(direct_limit(builtin::pruefer(3, 12)).is_unproven());
}

TEST_CASE("rank commutes with direct limits on exact outcomes") {
  const FgAbGroup g = FgAbGroup::make(3, ints({2}));
  const auto d = direct_limit(builtin::constant_direct(g, 10));
  CHECK(rationalized_rank(*d.exact_group()) == rationalized_rank(g));
}

TEST_CASE("cofinal triviality") {
  CHECK(cofinally_trivial_from(vanishing_tower()) == std::optional<std::size_t>(5));
  CHECK_FALSE(cofinally_trivial_from(builtin::p_adic(2, 10)).has_value());
}

TEST_CASE("Milnor assembly") {
  const GradedInverseTower finite{builtin::p_adic(2, 12), builtin::p_adic(3, 12)};
  const KGradedGroup k = milnor_assemble(finite);
  CHECK(std::get<LimitDescriptor>(*k.even).kind() == "ProfiniteNontrivial");
  CHECK(std::get<LimitDescriptor>(*k.odd).kind() == "ProfiniteNontrivial");

  const FgAbGroup a = FgAbGroup::make(1, ints({2})), b = FgAbGroup::cyclic(7);
  const KGradedGroup c = milnor_assemble({builtin::constant_inverse(a, 10), builtin::constant_inverse(b, 10)});
  CHECK(*std::get<LimitDescriptor>(*c.even).exact_group() == a);
  CHECK(*std::get<LimitDescriptor>(*c.odd).exact_group() == b);
  CHECK(&c.degree(2) == &c.degree(0));
  CHECK(&c.degree(-1) == &c.degree(1));

  // Degree 0 finite, degree 1 (Z, x2): lim^1 of degree 1 blocks degree 0.
  const KGradedGroup m = milnor_assemble({builtin::p_adic(2, 12), builtin::z_times(2, 12, 1)});
  const auto& blocked = as<limit::Unrepresentable>(std::get<LimitDescriptor>(*m.even));
  REQUIRE(blocked.lim1);
  CHECK(std::holds_alternative<lim1v::NonzeroUncomputed>(blocked.lim1->value));
  CHECK(std::get<LimitDescriptor>(*m.odd).exact_group() == FgAbGroup::trivial());

  CHECK_THROWS_AS(milnor_assemble({builtin::p_adic(2, 12), builtin::z_times(2, 12)}), MalformedInput);
  CHECK_THROWS_AS(milnor_assemble({builtin::p_adic(2, 12), builtin::p_adic(2, 14)}), MalformedInput);
}

TEST_CASE("truncated products") {
  CHECK(truncated_product(CyclicFamily::identity(), 2) == FgAbGroup::cyclic(2));
  const Presentation p = present_truncated_product(CyclicFamily::identity(), 10);
  const std::vector<BigInt> ones(10, BigInt(1));
  CHECK(element_order(GroupElement::make(p.group, p.transport(ones))) == BigInt(oracle::lcm_upto(10)));
  CHECK(*p.group.order() == BigInt(3628800));
  for (std::size_t n = 1; n <= 12; ++n)
    CHECK(builtin::sum_tower(CyclicFamily::identity(), 12).group_at(n) == truncated_product(CyclicFamily::identity(), n));
}

TEST_CASE("truncation maps are onto with the last factor as kernel") {
  const InverseTower t = builtin::product_tower(CyclicFamily::identity(2), 12);
  const FgAbGroup zero = FgAbGroup::trivial();
  for (std::size_t n = 3; n <= 12; ++n) {
    const Homomorphism proj = t.map_at(n);
    CHECK(cokernel(proj).is_trivial());
    const Subgroup k = kernel(proj);
    CHECK(k.group == FgAbGroup::cyclic(static_cast<long>(n)));
    CHECK(check_exact({Homomorphism::zero(zero, k.group), k.inclusion, proj, Homomorphism::zero(t.group_at(n - 1), zero)})
              .exact());
  }
}

TEST_CASE("unbounded torsion witnesses") {
  const auto w = unbounded_torsion_witness(CyclicFamily::identity(2), 20);
  REQUIRE(w);
  CHECK(std::vector<BigInt>(w->orders.begin(), w->orders.begin() + 4) == ints({2, 6, 12, 60}));
  for (std::size_t i = 0; i < w->orders.size(); ++i) {
    CHECK(w->orders[i] == BigInt(oracle::lcm_upto(w->levels[i])));
    if (i > 0) CHECK(w->orders[i - 1] < w->orders[i]);
  }
  CHECK_FALSE(unbounded_torsion_witness(CyclicFamily::constant(2), 20));
  CHECK_FALSE(unbounded_torsion_witness(CyclicFamily::constant(1), 20));
}

TEST_CASE("concurrent queries agree with sequential ones") {
  const InverseTower t = builtin::product_tower(CyclicFamily::identity(), 24);
  std::vector<FgAbGroup> seen(24);
  std::vector<std::thread> workers;
  for (std::size_t k = 0; k < 4; ++k)
    workers.emplace_back([&, k] {
      for (std::size_t n = 1 + k; n <= 24; n += 4) seen[n - 1] = t.group_at(n);
    });
  for (auto& w : workers) w.join();
  for (std::size_t n = 1; n <= 24; ++n) CHECK(seen[n - 1] == truncated_product(CyclicFamily::identity(), n));
}
