#include "ktower/json_io.hpp"

#include <algorithm>

#include "ktower/builtins.hpp"
#include "ktower/error.hpp"

namespace ktower::json {

namespace {

bool is_decimal(const std::string& s) {
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string at(const std::string& field, std::size_t i) { return field + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& field, const char* key) { return field + "." + key; }

const Json& require_array(const Json& j, const std::string& field) {
  if (!j.is_array()) throw MalformedInput(field + ": expected an array");
  return j;
}

Json opt_level(const std::optional<std::size_t>& n) { return n ? Json(*n) : Json(nullptr); }

}  // namespace

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) throw MalformedInput(field + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw MalformedInput(dot(field, key) + ": missing");
  return *it;
}

BigInt read_int(const Json& j, const std::string& field) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (!is_decimal(s)) throw MalformedInput(field + ": '" + s + "' is not a decimal integer");
    return BigInt(s, 10);
  }
  if (j.is_number_unsigned()) return BigInt(std::to_string(j.get<std::uint64_t>()), 10);
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<std::int64_t>()), 10);
  throw MalformedInput(field + ": expected an integer (number or decimal string)");
}

std::size_t read_count(const Json& j, const std::string& field) {
  const BigInt x = read_int(j, field);
  if (x < 0 || !x.fits_ulong_p()) throw MalformedInput(field + ": expected a non-negative count");
  return x.get_ui();
}

Json write(const BigInt& x) { return x.get_str(); }

Json write(const std::vector<BigInt>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(write(x));
  return out;
}

IntMatrix read_matrix(const Json& j, const std::string& field) {
  const std::size_t rows = read_count(require(j, "rows", field), dot(field, "rows"));
  const std::size_t cols = read_count(require(j, "cols", field), dot(field, "cols"));
  const auto entries_field = dot(field, "entries");
  const Json& e = require_array(require(j, "entries", field), entries_field);
  if (e.size() != rows) throw MalformedInput(entries_field + ": expected " + std::to_string(rows) + " rows");
  std::vector<BigInt> flat;
  flat.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = require_array(e[i], at(entries_field, i));
    if (row.size() != cols)
      throw MalformedInput(at(entries_field, i) + ": expected " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) flat.push_back(read_int(row[k], at(at(entries_field, i), k)));
  }
  return IntMatrix(rows, cols, std::move(flat));
}

Json write(const IntMatrix& m) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(write(m(i, k)));
    entries.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

FgAbGroup read_group(const Json& j, const std::string& field) {
  const std::size_t rank = read_count(require(j, "free_rank", field), dot(field, "free_rank"));
  const auto tfield = dot(field, "torsion");
  std::vector<BigInt> torsion;
  if (j.contains("torsion")) {
    const Json& t = require_array(j["torsion"], tfield);
    for (std::size_t i = 0; i < t.size(); ++i) torsion.push_back(read_int(t[i], at(tfield, i)));
  }
  try {
    return FgAbGroup::make(rank, std::move(torsion));
  } catch (const MalformedInput& e) {
    throw MalformedInput(field + ": " + e.what());
  }
}

Json write(const FgAbGroup& g) { return {{"free_rank", g.free_rank}, {"torsion", write(g.torsion)}}; }

Homomorphism read_hom(const Json& j, const std::string& field) {
  FgAbGroup source = read_group(require(j, "source", field), dot(field, "source"));
  FgAbGroup target = read_group(require(j, "target", field), dot(field, "target"));
  IntMatrix m = read_matrix(require(j, "matrix", field), dot(field, "matrix"));
  return Homomorphism::make(std::move(source), std::move(target), std::move(m));
}

Json write(const Homomorphism& f) {
  return {{"source", write(f.source())}, {"target", write(f.target())}, {"matrix", write(f.matrix())}};
}

std::vector<Homomorphism> read_sequence(const Json& j) {
  const Json& maps = require_array(require(j, "maps", "sequence"), "sequence.maps");
  std::vector<Homomorphism> out;
  for (std::size_t i = 0; i < maps.size(); ++i) out.push_back(read_hom(maps[i], at("sequence.maps", i)));
  return out;
}

Json write_sequence(const std::vector<Homomorphism>& maps) {
  Json arr = Json::array();
  for (const auto& f : maps) arr.push_back(write(f));
  return {{"maps", std::move(arr)}};
}

Json write(const SmithDecomposition& d) {
  return {{"factors", write(d.nonzero_factors())},
          {"rank", d.rank()},
          {"s", write(d.s)},
          {"u", write(d.u)},
          {"v", write(d.v)}};
}

Json write(const Subgroup& s) { return {{"group", write(s.group)}, {"inclusion", write(s.inclusion.matrix())}}; }

Json write(const ExactnessReport& r) {
  Json nodes = Json::array();
  for (const auto& n : r.nodes)
    nodes.push_back(
        {{"node", n.node}, {"exact", n.exact}, {"image", write(n.image)}, {"kernel", write(n.kernel)}});
  return {{"exact", r.exact()}, {"first_failure", opt_level(r.first_failure)}, {"nodes", std::move(nodes)}};
}

Json write(const LimitDescriptor& d) {
  Json out{{"kind", d.kind()}};
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, limit::ExactGroup>) {
          out["group"] = write(v.group);
          out["note"] = v.note;
        } else if constexpr (std::is_same_v<T, limit::Trivial>) {
          out["from_level"] = opt_level(v.from_level);
          out["note"] = v.note;
        } else if constexpr (std::is_same_v<T, limit::ProfiniteNontrivial>) {
          out["first_level"] = v.first_level;
          out["stable_orders"] = write(v.stable_orders);
        } else if constexpr (std::is_same_v<T, limit::Unrepresentable>) {
          out["reason"] = v.reason;
          out["limit"] = v.limit ? write(*v.limit) : Json(nullptr);
          out["lim1"] = v.lim1 ? write(*v.lim1) : Json(nullptr);
        } else {
          out["bound"] = v.bound;
          out["reason"] = v.reason;
        }
      },
      d.value);
  return out;
}

Json write(const Lim1Descriptor& d) {
  Json out{{"kind", d.kind()}};
  if (const auto* z = std::get_if<lim1v::Zero>(&d.value)) {
    out["rule"] = z->rule;
  } else if (const auto* n = std::get_if<lim1v::NonzeroUncomputed>(&d.value)) {
    out["witness_level"] = n->witness_level;
    out["note"] = n->note;
  } else {
    out["bound"] = std::get<lim1v::Unproven>(d.value).bound;
  }
  return out;
}

Json write(const MittagLefflerVerdict& v) {
  if (const auto* ok = std::get_if<ml::VerifiedUpTo>(&v)) return {{"kind", "VerifiedUpTo"}, {"bound", ok->bound}};
  if (const auto* f = std::get_if<ml::FailedAt>(&v))
    return {{"kind", "FailedAt"}, {"level", f->level}, {"witness", f->witness}};
  return {{"kind", "ForcedByRule"}, {"rule", std::get<ml::ForcedByRule>(v).rule}};
}

Json write(const TailClass& t) {
  Json out{{"kind", to_string(t.kind)}};
  if (t.kind == TailKind::EventuallyConstant) out["stable_from"] = t.stable_from;
  return out;
}

Json write(const KDegree& d, std::size_t truncations) {
  if (const auto* g = std::get_if<FgAbGroup>(&d)) return write(*g);
  if (const auto* l = std::get_if<LimitDescriptor>(&d)) return write(*l);
  const auto& c = std::get<CyclicFamilyDescriptor>(d);
  Json stages = Json::array();
  for (std::size_t n = c.family.first; n < c.family.first + truncations; ++n)
    stages.push_back({{"n", n}, {"group", write(c.truncate(n))}});
  return {{"kind", c.kind == CyclicFamilyDescriptor::Kind::Product ? "Product" : "Sum"},
          {"family", c.family.name},
          {"first", c.family.first},
          {"truncations", std::move(stages)}};
}

Json write(const KGradedGroup& g, std::size_t truncations) {
  auto slot = [truncations](const std::optional<KDegree>& d) { return d ? write(*d, truncations) : Json(nullptr); };
  return {{"even", slot(g.even)}, {"odd", slot(g.odd)}, {"total", slot(g.total)}};
}

Json write(const KResult& k, std::size_t truncations) {
  return {{"graded", write(k.graded, truncations)}, {"provenance", k.provenance}};
}

Json write(const GradedDims& d) { return {{"even", d.even}, {"odd", d.odd}}; }

Json write(const Restriction& r) {
  return {{"from_n", r.from_n},
          {"to_n", r.to_n},
          {"generator_images", r.generator_images},
          {"source_dims", write(r.source_dims)},
          {"image_dims", write(r.image_dims)},
          {"target_dims", write(r.target_dims)},
          {"surjective", r.surjective},
          {"kernel_dim", r.kernel_dim}};
}

Json write(const HpInverseSystem& s) {
  Json levels = Json::array();
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    Json row{{"n", s.levels[i]}, {"dims", write(s.dims[i])}};
    if (i > 0) row["restriction_surjective"] = static_cast<bool>(s.restriction_surjective[i - 1]);
    levels.push_back(std::move(row));
  }
  return {{"truncation", s.truncation},
          {"levels", std::move(levels)},
          {"lim1", write(s.lim1)},
          {"limit_finite_dimensional", s.limit_finite_dimensional},
          {"limit_note", s.limit_note}};
}

Json write(const ChernCheck& c) {
  return {{"pass", c.pass}, {"k_rank", c.k_rank}, {"hp_dim", c.hp_dim}, {"details", c.details}};
}

Json write(const DivisibilityTable& t) {
  return {{"level", t.level},
          {"n_max", t.n_max},
          {"values", write(t.values)},
          {"divisibility_ok", t.chain_ok},
          {"first_one", opt_level(t.first_one)}};
}

namespace {

struct PrefixData {
  std::size_t base;
  std::vector<FgAbGroup> groups;
  std::optional<std::vector<Homomorphism>> maps;
  TailClass tail;
  std::size_t bound;
};

PrefixData read_prefix(const Json& j, std::size_t bound) {
  PrefixData p;
  p.base = j.contains("base") ? read_count(j["base"], "tower.base") : 0;
  const Json& prefix = require_array(require(j, "prefix", "tower"), "tower.prefix");
  if (prefix.empty()) throw MalformedInput("tower.prefix: at least one level is required");
  for (std::size_t i = 0; i < prefix.size(); ++i) p.groups.push_back(read_group(prefix[i], at("tower.prefix", i)));
  if (j.contains("maps")) {
    const Json& maps = require_array(j["maps"], "tower.maps");
    if (maps.size() + 1 != prefix.size())
      throw MalformedInput("tower.maps: expected " + std::to_string(prefix.size() - 1) + " maps for " +
                           std::to_string(prefix.size()) + " levels");
    p.maps.emplace();
    for (std::size_t i = 0; i < maps.size(); ++i) p.maps->push_back(read_hom(maps[i], at("tower.maps", i)));
  }
  const Json& tail = require(j, "tail", "tower");
  if (!tail.is_string()) throw MalformedInput("tower.tail: expected \"constant\", \"finite\" or \"general\"");
  const auto kind = tail.get<std::string>();
  const std::size_t last = p.base + p.groups.size() - 1;
  p.bound = bound;
  if (kind == "constant") {
    p.tail = TailClass::eventually_constant(last);
  } else if (kind == "finite" || kind == "general") {
    p.tail = kind == "finite" ? TailClass::levelwise_finite() : TailClass::general();
    p.bound = std::min(bound, last);
  } else {
    throw MalformedInput("tower.tail: unknown tail '" + kind + "'");
  }
  return p;
}

template <Direction D>
Tower<D> prefix_tower(const Json& j, std::size_t bound) {
  PrefixData p = read_prefix(j, bound);
  for (std::size_t i = 0; p.maps && i < p.maps->size(); ++i) {
    const auto& f = (*p.maps)[i];
    const bool inverse = D == Direction::Inverse;
    const FgAbGroup& src = p.groups[inverse ? i + 1 : i];
    const FgAbGroup& dst = p.groups[inverse ? i : i + 1];
    if (!(f.source() == src) || !(f.target() == dst))
      throw MalformedInput(at("tower.maps", i) + ": source/target do not match the prefix levels");
  }
  TowerSpec s;
  s.name = "prefix";
  s.base = p.base;
  s.tail = p.tail;
  s.bound = p.bound;
  const std::size_t base = p.base;
  auto groups = std::make_shared<const std::vector<FgAbGroup>>(std::move(p.groups));
  s.group_at = [groups, base](std::size_t n) { return groups->at(std::min(n - base, groups->size() - 1)); };
  if (p.maps) {
    auto maps = std::make_shared<const std::vector<Homomorphism>>(std::move(*p.maps));
    s.map_at = [maps, base](std::size_t n) {
      return maps->at(D == Direction::Inverse ? n - base - 1 : n - base);
    };
  }
  return Tower<D>(std::move(s));
}

template <Direction D>
Tower<D> read_tower(const Json& j, std::size_t bound) {
  if (!j.is_object()) throw MalformedInput("tower: expected an object");
  if (j.contains("builtin")) {
    const Json& name = j["builtin"];
    if (!name.is_string()) throw MalformedInput("tower.builtin: expected a name");
    const Json params = j.contains("params") ? j["params"] : Json::object();
    if (!params.is_object()) throw MalformedInput("tower.params: expected an object");
    if constexpr (D == Direction::Inverse)
      return builtin_inverse(name.get<std::string>(), params, bound);
    else
      return builtin_direct(name.get<std::string>(), params, bound);
  }
  return prefix_tower<D>(j, bound);
}

}  // namespace

InverseTower read_inverse_tower(const Json& j, std::size_t bound) { return read_tower<Direction::Inverse>(j, bound); }
DirectTower read_direct_tower(const Json& j, std::size_t bound) { return read_tower<Direction::Direct>(j, bound); }

GradedInverseTower read_graded_tower(const Json& j, std::size_t bound) {
  if (!j.is_object()) throw MalformedInput("graded tower: expected an object");
  if (j.contains("builtin")) {
    const Json params = j.contains("params") ? j["params"] : Json::object();
    return builtin_graded(j["builtin"].get<std::string>(), params, bound);
  }
  return GradedInverseTower{read_inverse_tower(require(j, "even", "graded tower"), bound),
                            read_inverse_tower(require(j, "odd", "graded tower"), bound)};
}

}  // namespace ktower::json
