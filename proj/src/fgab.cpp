#include "ktower/fgab.hpp"

#include <sstream>

#include "ktower/error.hpp"

namespace ktower {

namespace {

// Materialised groups beyond this many cyclic summands are refused.
constexpr std::size_t kMaxSummands = std::size_t{1} << 20;

}  // namespace

FgAbGroup FgAbGroup::make(std::size_t free_rank, std::vector<BigInt> torsion) {
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    if (torsion[i] <= 1) {
      throw MalformedInput("torsion[" + std::to_string(i) + "] = " + torsion[i].get_str() +
                           " must be > 1");
    }
    if (i > 0 && !mpz_divisible_p(torsion[i].get_mpz_t(), torsion[i - 1].get_mpz_t())) {
      throw MalformedInput("torsion[" + std::to_string(i - 1) + "] = " + torsion[i - 1].get_str() +
                           " does not divide torsion[" + std::to_string(i) + "] = " +
                           torsion[i].get_str());
    }
  }
  return FgAbGroup{free_rank, std::move(torsion)};
}

FgAbGroup FgAbGroup::from_cyclic_orders(std::vector<BigInt> orders) {
  std::vector<BigInt> chain = diagonal_invariant_factors(std::move(orders));
  FgAbGroup g;
  for (auto& d : chain) {
    if (sgn(d) == 0)
      ++g.free_rank;
    else if (d != 1)
      g.torsion.push_back(std::move(d));
  }
  return g;
}

FgAbGroup FgAbGroup::cyclic(const BigInt& order) { return from_cyclic_orders({order}); }

BigInt FgAbGroup::generator_order(std::size_t i) const {
  if (i >= generator_count()) throw MalformedInput("generator index out of range");
  return i < torsion.size() ? torsion[i] : BigInt(0);
}

std::optional<BigInt> FgAbGroup::order() const {
  if (free_rank > 0) return std::nullopt;
  BigInt n = 1;
  for (const auto& d : torsion) n *= d;
  return n;
}

IntMatrix FgAbGroup::relation_matrix() const {
  return IntMatrix::diagonal(generator_count(), torsion.size(), torsion);
}

void FgAbGroup::reduce(std::vector<BigInt>& coords) const {
  for (std::size_t i = 0; i < torsion.size() && i < coords.size(); ++i)
    mpz_fdiv_r(coords[i].get_mpz_t(), coords[i].get_mpz_t(), torsion[i].get_mpz_t());
}

std::string FgAbGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank == 1) {
    os << "Z";
    first = false;
  } else if (free_rank > 1) {
    os << "Z^" << free_rank;
    first = false;
  }
  for (std::size_t i = 0; i < torsion.size();) {
    std::size_t j = i;
    while (j < torsion.size() && torsion[j] == torsion[i]) ++j;
    os << (first ? "" : " + ") << "Z/" << torsion[i].get_str();
    if (j - i > 1) os << "^" << (j - i);
    first = false;
    i = j;
  }
  return os.str();
}

std::vector<BigInt> Presentation::transport(const std::vector<BigInt>& coords) const {
  if (coords.size() != to_canonical.cols()) throw MalformedInput("transport: coordinate count mismatch");
  std::vector<BigInt> out(to_canonical.rows());
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < coords.size(); ++j) out[i] += to_canonical(i, j) * coords[j];
  group.reduce(out);
  return out;
}

Presentation present(const IntMatrix& relations) {
  const SmithDecomposition d = snf(relations);
  const std::size_t gens = relations.rows();
  std::vector<std::size_t> kept;
  Presentation p;
  for (std::size_t i = 0; i < gens; ++i) {
    BigInt e = i < d.factors.size() ? d.factors[i] : BigInt(0);
    if (e == 1) continue;
    kept.push_back(i);
    if (sgn(e) == 0)
      ++p.group.free_rank;
    else
      p.group.torsion.push_back(e);
  }
  p.to_canonical = IntMatrix(kept.size(), gens);
  p.from_canonical = IntMatrix(gens, kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k)
    for (std::size_t j = 0; j < gens; ++j) {
      p.to_canonical(k, j) = d.u(kept[k], j);
      p.from_canonical(j, k) = d.u_inv(j, kept[k]);
    }
  // Reduce the forward transport so torsion rows have small entries.
  for (std::size_t k = 0; k < p.group.torsion.size(); ++k)
    for (std::size_t j = 0; j < gens; ++j)
      mpz_fdiv_r(p.to_canonical(k, j).get_mpz_t(), p.to_canonical(k, j).get_mpz_t(),
                 p.group.torsion[k].get_mpz_t());
  return p;
}

FgAbGroup from_presentation(const IntMatrix& relations) { return present(relations).group; }

FgAbGroup direct_sum(const FgAbGroup& g, const FgAbGroup& h) {
  std::vector<BigInt> orders = g.torsion;
  orders.insert(orders.end(), h.torsion.begin(), h.torsion.end());
  FgAbGroup out = FgAbGroup::from_cyclic_orders(std::move(orders));
  out.free_rank = g.free_rank + h.free_rank;
  return out;
}

FgAbGroup power(const FgAbGroup& g, std::size_t k) {
  if (k != 0 && g.torsion.size() > kMaxSummands / k) {
    throw OutOfRange("power: " + std::to_string(g.torsion.size()) + " x " + std::to_string(k) +
                     " cyclic summands exceed the materialisation limit");
  }
  // Repeating each factor of a divisibility chain k times is again a chain.
  FgAbGroup out;
  out.free_rank = g.free_rank * k;
  out.torsion.reserve(g.torsion.size() * k);
  for (const auto& d : g.torsion) out.torsion.insert(out.torsion.end(), k, d);
  return out;
}

std::size_t rationalized_rank(const FgAbGroup& g) { return g.free_rank; }

GroupElement GroupElement::make(FgAbGroup group, std::vector<BigInt> coords) {
  if (coords.size() != group.generator_count()) {
    throw MalformedInput("element has " + std::to_string(coords.size()) + " coordinates, group has " +
                         std::to_string(group.generator_count()) + " generators");
  }
  group.reduce(coords);
  return GroupElement{std::move(group), std::move(coords)};
}

std::optional<BigInt> element_order(const GroupElement& x) {
  const auto& g = x.group;
  for (std::size_t i = g.torsion.size(); i < x.coords.size(); ++i)
    if (sgn(x.coords[i]) != 0) return std::nullopt;
  BigInt ord = 1;
  for (std::size_t i = 0; i < g.torsion.size(); ++i) {
    BigInt gcd;
    mpz_gcd(gcd.get_mpz_t(), x.coords[i].get_mpz_t(), g.torsion[i].get_mpz_t());
    ord = lcm(ord, g.torsion[i] / gcd);
  }
  return ord;
}

Homomorphism Homomorphism::make(FgAbGroup source, FgAbGroup target, IntMatrix matrix) {
  if (matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count()) {
    throw MalformedInput("matrix is " + std::to_string(matrix.rows()) + "x" +
                              std::to_string(matrix.cols()) + ", expected " +
                              std::to_string(target.generator_count()) + "x" +
                              std::to_string(source.generator_count()) + " (target x source generators)");
  }
  // d_j * column j must lie in the target relation lattice.
  const IntMatrix images = matrix * source.relation_matrix();
  if (!solve_integral(target.relation_matrix(), images)) {
    throw InvalidHomomorphism("matrix does not respect the source relations: " + matrix.to_string() +
                              " from " + source.to_string() + " to " + target.to_string());
  }
  for (std::size_t i = 0; i < target.torsion.size(); ++i)
    for (std::size_t j = 0; j < matrix.cols(); ++j)
      mpz_fdiv_r(matrix(i, j).get_mpz_t(), matrix(i, j).get_mpz_t(), target.torsion[i].get_mpz_t());
  return Homomorphism(std::move(source), std::move(target), std::move(matrix));
}

Homomorphism Homomorphism::identity(const FgAbGroup& g) {
  return Homomorphism(g, g, IntMatrix::identity(g.generator_count()));
}

Homomorphism Homomorphism::zero(const FgAbGroup& source, const FgAbGroup& target) {
  return Homomorphism(source, target, IntMatrix(target.generator_count(), source.generator_count()));
}

std::vector<BigInt> Homomorphism::apply(const std::vector<BigInt>& coords) const {
  if (coords.size() != source_.generator_count()) throw MalformedInput("apply: coordinate count mismatch");
  std::vector<BigInt> out(matrix_.rows());
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < coords.size(); ++j) out[i] += matrix_(i, j) * coords[j];
  target_.reduce(out);
  return out;
}

Homomorphism compose(const Homomorphism& outer, const Homomorphism& inner) {
  if (!(inner.target() == outer.source())) {
    throw MalformedInput("compose: " + inner.target().to_string() + " is not " +
                         outer.source().to_string());
  }
  return Homomorphism::make(inner.source(), outer.target(), outer.matrix() * inner.matrix());
}

Subgroup subgroup_generated(const FgAbGroup& ambient, const IntMatrix& generators) {
  if (generators.rows() != ambient.generator_count()) {
    throw MalformedInput("subgroup generators have " + std::to_string(generators.rows()) +
                         " rows, ambient has " + std::to_string(ambient.generator_count()) +
                         " generators");
  }
  // y in Z^k is a relation iff generators * y lies in the ambient lattice.
  const std::size_t k = generators.cols();
  const IntMatrix lattice = kernel_basis(hconcat(generators, ambient.relation_matrix()));
  const Presentation p = present(lattice.row_block(0, k));
  return Subgroup{p.group, Homomorphism::make(p.group, ambient, generators * p.from_canonical)};
}

bool subgroup_contains(const FgAbGroup& ambient, const IntMatrix& span, const IntMatrix& gens) {
  return solve_integral(hconcat(span, ambient.relation_matrix()), gens).has_value();
}

bool same_subgroup(const Homomorphism& a, const Homomorphism& b) {
  if (!(a.target() == b.target())) throw MalformedInput("same_subgroup: different ambient groups");
  const FgAbGroup& ambient = a.target();
  return subgroup_contains(ambient, a.matrix(), b.matrix()) &&
         subgroup_contains(ambient, b.matrix(), a.matrix());
}

Subgroup kernel(const Homomorphism& f) {
  // Lift to free covers: x is in the kernel iff M x lies in the target lattice.
  const std::size_t n = f.source().generator_count();
  const IntMatrix lifted = kernel_basis(hconcat(f.matrix(), f.target().relation_matrix()));
  return subgroup_generated(f.source(), lifted.row_block(0, n));
}

Subgroup image(const Homomorphism& f) { return subgroup_generated(f.target(), f.matrix()); }

Quotient cokernel_projection(const Homomorphism& f) {
  const Presentation p = present(hconcat(f.target().relation_matrix(), f.matrix()));
  return Quotient{p.group, Homomorphism::make(f.target(), p.group, p.to_canonical)};
}

FgAbGroup cokernel(const Homomorphism& f) { return cokernel_projection(f).group; }

bool is_isomorphism(const Homomorphism& f) {
  return kernel(f).group.is_trivial() && cokernel(f).is_trivial();
}

std::vector<std::size_t> ExactnessReport::failing_nodes() const {
  std::vector<std::size_t> out;
  for (const auto& n : nodes)
    if (!n.exact) out.push_back(n.node);
  return out;
}

ExactnessReport check_exact(const std::vector<Homomorphism>& maps) {
  for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
    if (!(maps[i].target() == maps[i + 1].source())) {
      throw MalformedInput("maps[" + std::to_string(i) + "] lands in " + maps[i].target().to_string() +
                           " but maps[" + std::to_string(i + 1) + "] starts at " +
                           maps[i + 1].source().to_string());
    }
  }
  ExactnessReport report;
  for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
    Subgroup im = image(maps[i]);
    Subgroup ker = kernel(maps[i + 1]);
    const bool ok = same_subgroup(im.inclusion, ker.inclusion);
    report.nodes.push_back(NodeExactness{i + 1, ok, im.group, ker.group});
    if (!ok && !report.first_failure) report.first_failure = i + 1;
  }
  return report;
}

}  // namespace ktower
