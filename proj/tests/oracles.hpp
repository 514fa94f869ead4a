#pragma once

// Reference computations for the tests. None of these call into the library
// beyond reading plain data out of its value types.

#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "ktower/fgab.hpp"

namespace oracle {

using ktower::BigInt;
using ktower::FgAbGroup;
using ktower::Homomorphism;

inline BigInt euclid_gcd(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt r = a % b;
    a = b;
    b = r;
  }
  return a;
}

/// C(l + i, i) by the multiplicative formula, exact at every step.
inline BigInt binomial(std::uint64_t top, std::uint64_t k) {
  BigInt r = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    r *= static_cast<unsigned long>(top - k + j);
    r /= static_cast<unsigned long>(j);
  }
  return r;
}

inline BigInt c_value(std::size_t n, std::uint64_t level) {
  BigInt g = 0;
  for (std::size_t i = 1; i < n; ++i) g = euclid_gcd(g, binomial(level + i, i) - 1);
  return g;
}

inline std::uint64_t lcm_upto(std::uint64_t n) {
  std::uint64_t l = 1;
  for (std::uint64_t i = 1; i <= n; ++i) l = std::lcm(l, i);
  return l;
}

/// (even, odd) monomial counts of an exterior algebra, by listing subsets.
inline std::pair<std::uint64_t, std::uint64_t> exterior_dims(const std::vector<std::uint64_t>& degrees) {
  std::uint64_t even = 0, odd = 0;
  const std::size_t g = degrees.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g); ++mask) {
    std::uint64_t deg = 0;
    for (std::size_t i = 0; i < g; ++i)
      if (mask >> i & 1) deg += degrees[i];
    (deg % 2 == 0 ? even : odd) += 1;
  }
  return {even, odd};
}

// ---- finite abelian groups by element enumeration ---------------------------

using Element = std::vector<long>;

inline std::vector<long> orders_of(const FgAbGroup& g) {
  std::vector<long> out;
  for (const auto& d : g.torsion) out.push_back(d.get_si());
  return out;
}

inline std::vector<Element> elements(const std::vector<long>& orders) {
  std::vector<Element> out{Element(orders.size(), 0)};
  for (std::size_t i = 0; i < orders.size(); ++i) {
    std::vector<Element> next;
    for (const auto& e : out)
      for (long v = 0; v < orders[i]; ++v) {
        Element x = e;
        x[i] = v;
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

inline Element scale(long k, const Element& x, const std::vector<long>& orders) {
  Element y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = ((k * x[i]) % orders[i] + orders[i]) % orders[i];
  return y;
}

inline bool is_zero(const Element& x) {
  return std::all_of(x.begin(), x.end(), [](long v) { return v == 0; });
}

/// f applied to a source element, reduced in the (finite) target.
inline Element apply(const Homomorphism& f, const Element& x, const std::vector<long>& tgt) {
  Element y(tgt.size(), 0);
  for (std::size_t i = 0; i < tgt.size(); ++i) {
    BigInt acc = 0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += f.matrix()(i, j) * x[j];
    acc %= tgt[i];
    if (acc < 0) acc += tgt[i];
    y[i] = acc.get_si();
  }
  return y;
}

/// #{x in set : k x = 0} for k = 1..kmax. For finite abelian groups this
/// profile determines the isomorphism class.
inline std::vector<long> profile(const std::vector<Element>& set, const std::vector<long>& orders, long kmax) {
  std::vector<long> out;
  for (long k = 1; k <= kmax; ++k)
    out.push_back(std::count_if(set.begin(), set.end(), [&](const Element& x) { return is_zero(scale(k, x, orders)); }));
  return out;
}

/// The same profile read off an invariant-factor list: prod gcd(k, d_i).
inline std::vector<long> profile_of(const FgAbGroup& g, long kmax) {
  std::vector<long> out;
  for (long k = 1; k <= kmax; ++k) {
    long p = 1;
    for (const auto& d : g.torsion) p *= std::gcd(k, d.get_si());
    out.push_back(p);
  }
  return out;
}

/// Profile of target / S for a subgroup S given as an element set.
inline std::vector<long> quotient_profile(const std::vector<Element>& target, const std::set<Element>& sub,
                                          const std::vector<long>& orders, long kmax) {
  std::vector<long> out;
  for (long k = 1; k <= kmax; ++k) {
    long c = 0;
    for (const auto& y : target)
      if (sub.count(scale(k, y, orders))) ++c;
    out.push_back(c / static_cast<long>(sub.size()));
  }
  return out;
}

/// Every canonical finite group of order at most `max_order`.
inline std::vector<FgAbGroup> finite_groups(long max_order) {
  std::vector<FgAbGroup> out;
  std::function<void(std::vector<BigInt>&, long, long)> rec = [&](std::vector<BigInt>& chain, long order, long last) {
    out.push_back(FgAbGroup::make(0, chain));
    for (long d = last; order * d <= max_order; d += last) {
      chain.push_back(d);
      rec(chain, order * d, d);
      chain.pop_back();
    }
  };
  std::vector<BigInt> chain;
  for (long d = 2; d <= max_order; ++d) {
    chain.push_back(d);
    rec(chain, d, d);
    chain.pop_back();
  }
  out.push_back(FgAbGroup::trivial());
  return out;
}

/// A random valid homomorphism between finite canonical groups: entry (i, j)
/// is a multiple of t_i / gcd(t_i, s_j).
inline Homomorphism random_hom(const FgAbGroup& s, const FgAbGroup& t, std::mt19937_64& rng) {
  const auto so = orders_of(s), to = orders_of(t);
  ktower::IntMatrix m(to.size(), so.size());
  for (std::size_t i = 0; i < to.size(); ++i)
    for (std::size_t j = 0; j < so.size(); ++j) {
      const long step = to[i] / std::gcd(to[i], so[j]);
      m(i, j) = static_cast<long>(rng() % 7) * step;
    }
  return Homomorphism::make(s, t, m);
}

}  // namespace oracle
