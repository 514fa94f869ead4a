#include <doctest.h>

#include "ktower/error.hpp"
#include "ktower/ktwist.hpp"
#include "oracles.hpp"

using namespace ktower;

namespace {

const FgAbGroup& group_of(const std::optional<KDegree>& d) {
  REQUIRE(d);
  REQUIRE(std::holds_alternative<FgAbGroup>(*d));
  return std::get<FgAbGroup>(*d);
}

const LimitDescriptor& limit_of(const std::optional<KDegree>& d) {
  REQUIRE(d);
  REQUIRE(std::holds_alternative<LimitDescriptor>(*d));
  return std::get<LimitDescriptor>(*d);
}

}  // namespace

TEST_CASE("c(n, l) spot values") {
  for (std::uint64_t l = 1; l <= 100; ++l) CHECK(su_cyclic_order(2, l) == BigInt(static_cast<unsigned long>(l)));
  CHECK(su_cyclic_order(3, 2) == 1);
  CHECK(su_cyclic_order(3, 3) == 3);
  CHECK(su_cyclic_order(4, 3) == 1);
  CHECK(su_cyclic_order(4, 6) == 1);
  CHECK(su_cyclic_order(3, 6) == 3);
  CHECK_THROWS_AS(su_cyclic_order(1, 3), OutOfRange);
  CHECK_THROWS_AS(su_cyclic_order(3, 0), OutOfRange);
}

TEST_CASE("c(n, l) matches the Pascal recomputation") {
  for (std::size_t n = 2; n <= 24; ++n)
    for (std::uint64_t l = 1; l <= 24; ++l) CHECK(su_cyclic_order(n, l) == oracle::c_value(n, l));
}

TEST_CASE("c(n, l) divides c(m, l) for n >= m") {
  for (std::uint64_t l = 1; l <= 24; ++l) {
    const DivisibilityTable t = divisibility_table(l, 24);
    CHECK(t.chain_ok);
    for (std::size_t n = 2; n <= 24; ++n)
      for (std::size_t m = 2; m <= n; ++m) CHECK(t.at(m) % t.at(n) == 0);
  }
}

TEST_CASE("divisibility table examples") {
  const DivisibilityTable one = divisibility_table(1, 6);
  for (const auto& v : one.values) CHECK(v == 1);
  CHECK(one.first_one == std::optional<std::size_t>(2));

  const DivisibilityTable three = divisibility_table(3, 4);
  CHECK(three.values == std::vector<BigInt>{3, 3, 1});
  CHECK(three.first_one == std::optional<std::size_t>(4));

  CHECK(divisibility_table(6, 4).values == std::vector<BigInt>{6, 3, 1});
  CHECK_THROWS_AS(divisibility_table(3, 1), OutOfRange);
}

TEST_CASE("twisted K of SU(n)") {
  CHECK(group_of(twisted_k(TwistedSpace::su(2, 2)).graded.total) == FgAbGroup::make(0, {2, 2}));
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::uint64_t l = 1; l <= 8; ++l) {
      const KResult k = twisted_k(TwistedSpace::su(n, l));
      const FgAbGroup& g = group_of(k.graded.total);
      const BigInt c = oracle::c_value(n, l);
      if (c == 1) {
        CHECK(g.is_trivial());
      } else {
        CHECK(g.free_rank == 0);
        CHECK(g.torsion == std::vector<BigInt>(std::size_t{1} << (n - 1), c));
      }
      CHECK_FALSE(k.provenance.empty());
      CHECK_FALSE(k.graded.even.has_value());
      CHECK(rationalized_rank(k) == 0);
    }
}

TEST_CASE("twisted K of spheres") {
  const KResult s = twisted_k(TwistedSpace::sphere3(5));
  CHECK(group_of(s.graded.even).is_trivial());
  CHECK(group_of(s.graded.odd) == FgAbGroup::cyclic(5));
  CHECK(rationalized_rank(s) == 0);

  const KResult u = twisted_k(TwistedSpace::sphere_union());
  REQUIRE(u.graded.odd);
  const auto& prod = std::get<CyclicFamilyDescriptor>(*u.graded.odd);
  CHECK(prod.kind == CyclicFamilyDescriptor::Kind::Product);
  CHECK(prod.truncate(4) == FgAbGroup::make(0, {2, 12}));
  CHECK_THROWS_AS(rationalized_rank(u), Unresolved);
}

TEST_CASE("K-homology of the sphere union truncates like K-theory") {
  const KResult k = twisted_k(TwistedSpace::sphere_union());
  const KResult h = twisted_khomology(TwistedSpace::sphere_union());
  const auto& prod = std::get<CyclicFamilyDescriptor>(*k.graded.odd);
  const auto& sum = std::get<CyclicFamilyDescriptor>(*h.graded.total);
  CHECK(sum.kind == CyclicFamilyDescriptor::Kind::Sum);
  for (std::size_t n = 1; n <= 20; ++n) CHECK(sum.truncate(n) == prod.truncate(n));
}

TEST_CASE("twisted K-homology of SU(n)") {
  CHECK(group_of(twisted_khomology(TwistedSpace::su(2, 4)).graded.total) == FgAbGroup::make(0, {4, 4}));
  CHECK(group_of(twisted_khomology(TwistedSpace::sphere3(7)).graded.total) == FgAbGroup::cyclic(7));
}

TEST_CASE("SU(infinity) is trivial exactly when the table finds a 1") {
  for (std::uint64_t l = 1; l <= 16; ++l) {
    const KResult k = twisted_k(TwistedSpace::su_infinite(l));
    const KResult h = twisted_khomology(TwistedSpace::su_infinite(l));
    const bool found = divisibility_table(l, kDefaultBound).first_one.has_value();
    CHECK(limit_of(k.graded.total).is_trivial() == found);
    CHECK(limit_of(h.graded.total).is_trivial() == found);
    CHECK(limit_of(k.graded.even).is_trivial() == found);
    CHECK(limit_of(h.graded.odd).is_trivial() == found);
  }
  const KResult three = twisted_k(TwistedSpace::su_infinite(3));
  const auto& t = std::get<limit::Trivial>(limit_of(three.graded.total).value);
  CHECK(t.from_level == std::optional<std::size_t>(4));
}

TEST_CASE("SU(infinity) without a 1 inside the bound is Unproven") {
  // c(n, 16) = 1 first at n = 17, beyond a bound of 10.
  CHECK_FALSE(divisibility_table(16, 10).first_one.has_value());
  const KResult k = twisted_k(TwistedSpace::su_infinite(16), 10);
  CHECK(limit_of(k.graded.total).is_unproven());
  CHECK_FALSE(limit_of(k.graded.even).is_trivial());
  CHECK(limit_of(twisted_khomology(TwistedSpace::su_infinite(16), 10).graded.total).is_unproven());
}

TEST_CASE("stabilization keeps the groups") {
  const KResult k = twisted_k(TwistedSpace::su(3, 3));
  const KResult s = stabilize(k);
  const KResult ss = stabilize(s);
  CHECK(group_of(s.graded.total) == group_of(k.graded.total));
  CHECK(group_of(ss.graded.total) == group_of(k.graded.total));
  CHECK(s.provenance.size() == k.provenance.size() + 1);
  const KResult triv = stabilize(twisted_k(TwistedSpace::su_infinite(2)));
  CHECK(limit_of(triv.graded.total).is_trivial());
}

TEST_CASE("untwisted and out-of-range spaces are rejected") {
  CHECK_THROWS_AS(TwistedSpace::su(1, 2), OutOfRange);
  CHECK_THROWS_AS(TwistedSpace::su(3, 0), OutOfRange);
  CHECK_THROWS_AS(TwistedSpace::su_infinite(0), OutOfRange);
  CHECK_THROWS_AS(TwistedSpace::sphere3(0), OutOfRange);
}

TEST_CASE("level towers") {
  const InverseTower t = su_k_total_tower(3);
  CHECK(t.group_at(3) == power(FgAbGroup::cyclic(3), 4));
  CHECK(t.group_at(4).is_trivial());
  const GradedInverseTower g = su_k_graded_tower(3);
  CHECK(g.even.group_at(5).is_trivial());
  CHECK_THROWS_AS(g.even.group_at(3), Unresolved);
  CHECK(direct_limit(su_khomology_total_tower(2)).is_trivial());
}
