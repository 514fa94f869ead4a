#include "ktower/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include "ktower/builtins.hpp"
#include "ktower/cyclic.hpp"
#include "ktower/error.hpp"
#include "ktower/json_io.hpp"
#include "ktower/ktwist.hpp"

namespace ktower::cli {

namespace {

using json::Json;

struct Outcome {
  Json data;
  std::string table;
  int code = kOk;
};

struct Globals {
  std::size_t bound = kDefaultBound;
  std::string format = "table";
  std::string output;
  std::string input;
};

Json read_payload(const Globals& g, std::istream& in) {
  std::string text;
  if (!g.input.empty()) {
    std::ifstream f(g.input);
    if (!f) throw MalformedInput("--input: cannot open '" + g.input + "'");
    text.assign(std::istreambuf_iterator<char>(f), {});
  } else {
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedInput(std::string("payload: ") + e.what());
  }
}

std::string describe(const LimitDescriptor& d) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, limit::ExactGroup>) {
          return v.group.to_string() + " (" + v.note + ")";
        } else if constexpr (std::is_same_v<T, limit::Trivial>) {
          return "0" + (v.from_level ? " (trivial from level " + std::to_string(*v.from_level) + ")" : std::string()) +
                 (v.note.empty() ? "" : " [" + v.note + "]");
        } else if constexpr (std::is_same_v<T, limit::ProfiniteNontrivial>) {
          std::string s = "profinite, nontrivial; stable image orders from level " + std::to_string(v.first_level) + ":";
          for (const auto& o : v.stable_orders) s += " " + o.get_str();
          return s;
        } else if constexpr (std::is_same_v<T, limit::Unrepresentable>) {
          return "unrepresentable: " + v.reason;
        } else {
          return "unproven within bound " + std::to_string(v.bound) + ": " + v.reason;
        }
      },
      d.value);
}

std::string describe(const Lim1Descriptor& d) {
  if (const auto* z = std::get_if<lim1v::Zero>(&d.value)) return "0 (" + z->rule + ")";
  if (const auto* n = std::get_if<lim1v::NonzeroUncomputed>(&d.value))
    return "nonzero, not computed (witness level " + std::to_string(n->witness_level) + "): " + n->note;
  return "unproven within bound " + std::to_string(std::get<lim1v::Unproven>(d.value).bound);
}

std::string describe(const KDegree& d, std::size_t truncations) {
  if (const auto* g = std::get_if<FgAbGroup>(&d)) return g->to_string();
  if (const auto* l = std::get_if<LimitDescriptor>(&d)) return describe(*l);
  const auto& c = std::get<CyclicFamilyDescriptor>(d);
  std::string s = std::string(c.kind == CyclicFamilyDescriptor::Kind::Product ? "product" : "sum") +
                  " over n >= " + std::to_string(c.family.first) + " of " + c.family.name;
  for (std::size_t n = c.family.first; n < c.family.first + truncations; ++n)
    s += "\n    truncated at " + std::to_string(n) + ": " + c.truncate(n).to_string();
  return s;
}

bool unproven(const std::optional<KDegree>& d) {
  if (!d) return false;
  const auto* l = std::get_if<LimitDescriptor>(&*d);
  return l && l->is_unproven();
}

// ---- snf / group / hom / exact ---------------------------------------------

Outcome cmd_snf(const Globals& g, std::istream& in) {
  const Json payload = read_payload(g, in);
  const IntMatrix a = json::read_matrix(payload.contains("matrix") ? payload["matrix"] : payload);
  const SmithDecomposition d = snf(a);
  Outcome o{json::write(d), {}, kOk};
  std::ostringstream t;
  t << "invariant factors:";
  for (const auto& f : d.nonzero_factors()) t << ' ' << f.get_str();
  t << "\nrank: " << d.rank() << "\nS =\n" << d.s.to_string();
  o.table = t.str();
  return o;
}

Outcome cmd_group(const Globals& g, std::istream& in) {
  const Json payload = read_payload(g, in);
  FgAbGroup grp;
  if (payload.contains("relations")) {
    grp = from_presentation(json::read_matrix(payload["relations"], "relations"));
  } else if (payload.contains("orders")) {
    std::vector<BigInt> orders;
    const Json& arr = payload["orders"];
    if (!arr.is_array()) throw MalformedInput("orders: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      orders.push_back(json::read_int(arr[i], "orders[" + std::to_string(i) + "]"));
      if (orders.back() < 0) throw MalformedInput("orders[" + std::to_string(i) + "]: must be >= 0");
    }
    grp = FgAbGroup::from_cyclic_orders(std::move(orders));
  } else {
    grp = json::read_group(payload);
  }
  const auto order = grp.order();
  Outcome o;
  o.data = {{"group", json::write(grp)},
            {"order", order ? json::write(*order) : Json("infinite")},
            {"rationalized_rank", rationalized_rank(grp)}};
  o.table = grp.to_string() + "\norder: " + (order ? order->get_str() : "infinite") +
            "\nrank: " + std::to_string(rationalized_rank(grp));
  return o;
}

Outcome cmd_hom(const Globals& g, std::istream& in) {
  const Homomorphism f = json::read_hom(read_payload(g, in));
  const Subgroup k = kernel(f);
  const Subgroup im = image(f);
  const FgAbGroup ck = cokernel(f);
  const bool iso = is_isomorphism(f);
  Outcome o;
  o.data = {{"kernel", json::write(k)}, {"image", json::write(im)}, {"cokernel", json::write(ck)}, {"isomorphism", iso}};
  o.table = "kernel:   " + k.group.to_string() + "\nimage:    " + im.group.to_string() +
            "\ncokernel: " + ck.to_string() + "\nisomorphism: " + (iso ? "yes" : "no");
  return o;
}

Outcome cmd_exact(const Globals& g, std::istream& in) {
  const ExactnessReport r = check_exact(json::read_sequence(read_payload(g, in)));
  Outcome o{json::write(r), {}, r.exact() ? kOk : kCheckFailed};
  std::ostringstream t;
  for (const auto& n : r.nodes)
    t << "node " << n.node << ": image " << n.image.to_string() << ", kernel " << n.kernel.to_string() << " -> "
      << (n.exact ? "exact" : "NOT exact") << '\n';
  if (r.exact())
    t << "exact at all nodes";
  else
    t << "fails at node " << *r.first_failure;
  o.table = t.str();
  return o;
}

// ---- tower -------------------------------------------------------------------

struct TowerArgs {
  std::string builtin;
  std::vector<std::string> params;
  std::size_t level = 0;
  std::size_t depth = 1;
};

Json tower_json(const Globals& g, const TowerArgs& a, std::istream& in) {
  if (a.builtin.empty()) return read_payload(g, in);
  Json params = Json::object();
  for (const auto& kv : a.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw MalformedInput("--param: expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      params[key] = Json::parse(value);
    } catch (const Json::parse_error&) {
      params[key] = value;
    }
  }
  return {{"builtin", a.builtin}, {"params", params}};
}

Outcome limit_outcome(const LimitDescriptor& d, const std::string& what) {
  return {{{"verdict", json::write(d)}}, what + ": " + describe(d), d.is_unproven() ? kUnproven : kOk};
}

Outcome cmd_tower(const std::string& sub, const Globals& g, const TowerArgs& a, std::istream& in) {
  const Json spec = tower_json(g, a, in);
  if (sub == "colim") return limit_outcome(direct_limit(json::read_direct_tower(spec, g.bound)), "colim");
  if (sub == "milnor") {
    const KGradedGroup k = milnor_assemble(json::read_graded_tower(spec, g.bound));
    Outcome o{{{"degrees", json::write(k)}}, {}, kOk};
    o.table = "degree 0: " + describe(*k.even, 0) + "\ndegree 1: " + describe(*k.odd, 0);
    if (unproven(k.even) || unproven(k.odd)) o.code = kUnproven;
    return o;
  }
  const InverseTower t = json::read_inverse_tower(spec, g.bound);
  if (sub == "lim") return limit_outcome(inverse_limit(t), "lim");
  if (sub == "lim1") {
    const Lim1Descriptor d = lim1(t);
    const bool open = std::holds_alternative<lim1v::Unproven>(d.value);
    return {{{"verdict", json::write(d)}}, "lim^1: " + describe(d), open ? kUnproven : kOk};
  }
  if (sub == "ml") {
    const MittagLefflerVerdict v = is_mittag_leffler(t);
    std::string text;
    if (const auto* ok = std::get_if<ml::VerifiedUpTo>(&v))
      text = "Mittag-Leffler verified up to level " + std::to_string(ok->bound);
    else if (const auto* f = std::get_if<ml::FailedAt>(&v))
      text = "Mittag-Leffler fails at level " + std::to_string(f->level) + ": " + f->witness;
    else
      text = "Mittag-Leffler by rule: " + std::get<ml::ForcedByRule>(v).rule;
    return {{{"verdict", json::write(v)}}, text, kOk};
  }
  // chain
  const auto images = image_chain(t, a.level, a.depth);
  Outcome o;
  o.data = Json{{"level", a.level}, {"images", Json::array()}};
  std::ostringstream text;
  for (std::size_t k = 0; k < images.size(); ++k) {
    o.data["images"].push_back({{"from", a.level + k}, {"image", json::write(images[k])}});
    text << "im(" << a.level + k << " -> " << a.level << ") = " << images[k].to_string() << '\n';
  }
  o.table = text.str();
  return o;
}

// ---- ktwist / hp / product / grid / chern -----------------------------------

struct SpaceArgs {
  std::string space;
  std::size_t n = 0;
  std::uint64_t level = 0;
  std::string twist;
  std::size_t truncate = 5;
  bool homology = false;
  bool stabilized = false;
  std::vector<std::size_t> table;
  bool twisted = false;
};

TwistedSpace make_space(const SpaceArgs& a) {
  if (a.space == "su") return TwistedSpace::su(a.n, a.level);
  if (a.space == "su-inf") return TwistedSpace::su_infinite(a.level);
  if (a.space == "s3") {
    if (a.twist.empty()) throw MalformedInput("--twist: required for --space s3");
    return TwistedSpace::sphere3(json::read_int(Json(a.twist), "--twist"));
  }
  if (a.space == "s3-union") return TwistedSpace::sphere_union();
  throw MalformedInput("--space: expected su, su-inf, s3 or s3-union, got '" + a.space + "'");
}

Outcome grid_outcome(std::size_t n_max, std::size_t level_max, std::size_t bound);

Outcome cmd_ktwist(const Globals& g, const SpaceArgs& a) {
  if (!a.table.empty()) return grid_outcome(a.table[0], a.table[1], g.bound);
  const TwistedSpace space = make_space(a);
  KResult k = a.homology ? twisted_khomology(space, g.bound) : twisted_k(space, g.bound);
  if (a.stabilized) k = stabilize(k);
  const std::string prefix = a.homology ? "khom" : "k";
  Outcome o;
  o.data = Json{{"space", space.describe()}, {"provenance", k.provenance}};
  std::ostringstream text;
  text << (a.homology ? "twisted K-homology of " : "twisted K-theory of ") << space.describe() << '\n';
  const std::pair<const char*, const std::optional<KDegree>*> slots[] = {
      {"even", &k.graded.even}, {"odd", &k.graded.odd}, {"total", &k.graded.total}};
  for (const auto& [name, slot] : slots) {
    if (!*slot) continue;
    o.data[prefix + "_" + name] = json::write(**slot, a.truncate);
    text << "  " << name << ": " << describe(**slot, a.truncate) << '\n';
    if (unproven(*slot)) o.code = kUnproven;
  }
  text << "provenance:";
  for (const auto& p : k.provenance) text << "\n  - " << p;
  o.table = text.str();
  return o;
}

Outcome cmd_hp(const Globals& g, const SpaceArgs& a) {
  Outcome o;
  if (a.twisted) {
    const TwistedSpace space = a.space == "su" ? TwistedSpace::su(a.n, a.level)
                               : a.space == "su-inf"
                                   ? TwistedSpace::su_infinite(a.level)
                                   : throw MalformedInput("--space: twisted HP supports su and su-inf");
    const TwistedHP hp = twisted_hp(space, g.bound);
    o.data = {{"space", space.describe()}, {"twisted_hp", json::write(hp.dims)}, {"provenance", hp.provenance}};
    o.table = "twisted HP of " + space.describe() + ": even " + std::to_string(hp.dims.even) + ", odd " +
              std::to_string(hp.dims.odd);
    for (const auto& p : hp.provenance) o.table += "\n  - " + p;
    return o;
  }
  if (a.space == "su") {
    const ExteriorAlgebra alg = su_de_rham(a.n);
    const GradedDims d = graded_dims(alg);
    o.data = {{"n", a.n}, {"generator_degrees", alg.generator_degrees()}, {"hp", json::write(d)}};
    if (a.n >= 3) o.data["restriction"] = json::write(restriction(a.n));
    o.table = "HP of SU(" + std::to_string(a.n) + "): even " + std::to_string(d.even) + ", odd " +
              std::to_string(d.odd);
    return o;
  }
  if (a.space == "su-inf") {
    const HpInverseSystem s = hp_su_infinity(a.truncate);
    o.data = json::write(s);
    std::ostringstream text;
    for (std::size_t i = 0; i < s.levels.size(); ++i)
      text << "n = " << s.levels[i] << ": (" << s.dims[i].even << ", " << s.dims[i].odd << ")"
           << (i > 0 ? (s.restriction_surjective[i - 1] ? "  restriction onto" : "  restriction NOT onto") : "")
           << '\n';
    text << "lim^1: " << describe(s.lim1) << "\nlimit: " << s.limit_note;
    o.table = text.str();
    return o;
  }
  throw MalformedInput("--space: untwisted HP supports su and su-inf");
}

struct ProductArgs {
  std::string family = "identity";
  std::string value;
  std::size_t n = 10;
};

Outcome cmd_product(const Globals& g, const ProductArgs& a) {
  Json params{{"family", a.family}};
  if (!a.value.empty()) params["value"] = a.value;
  const CyclicFamily fam = read_family(params);
  if (a.n < fam.first) throw OutOfRange("--n: must be >= " + std::to_string(fam.first));
  const Presentation p = present_truncated_product(fam, a.n);
  std::vector<BigInt> ones(a.n - fam.first + 1, BigInt(1));
  const auto ord = element_order(GroupElement::make(p.group, p.transport(ones)));
  const FgAbGroup sum = builtin::sum_tower(fam, std::max(a.n, fam.first)).group_at(a.n);
  const auto witness = unbounded_torsion_witness(fam, g.bound);
  Outcome o;
  o.data = {{"family", fam.name},
            {"n", a.n},
            {"product", json::write(p.group)},
            {"sum", json::write(sum)},
            {"all_ones_order", ord ? json::write(*ord) : Json("infinite")}};
  std::ostringstream text;
  text << "product over " << fam.first << ".." << a.n << ": " << p.group.to_string() << "\nsum over " << fam.first
       << ".." << a.n << ":     " << sum.to_string() << "\norder of (1, ..., 1): " << (ord ? ord->get_str() : "infinite");
  if (witness) {
    Json w{{"levels", witness->levels}, {"orders", json::write(witness->orders)}};
    o.data["torsion_witness"] = w;
    text << "\nunbounded torsion witness up to " << g.bound << ":";
    for (std::size_t i = 0; i < witness->levels.size(); ++i)
      text << ' ' << witness->orders[i].get_str() << '@' << witness->levels[i];
  } else {
    o.data["torsion_witness"] = nullptr;
    text << "\nno torsion growth up to " << g.bound;
  }
  o.table = text.str();
  return o;
}

Outcome grid_outcome(std::size_t n_max, std::size_t level_max, std::size_t bound) {
  if (n_max < 2 || level_max < 1) throw OutOfRange("grid needs n_max >= 2 and level_max >= 1");
  Outcome o;
  o.data = Json{{"n_max", n_max}, {"level_max", level_max}, {"bound", bound}, {"rows", Json::array()}};
  std::ostringstream text;
  text << "level |";
  for (std::size_t n = 2; n <= n_max; ++n) text << " n=" << n;
  text << " | divisibility | first n with c = 1\n";
  for (std::uint64_t level = 1; level <= level_max; ++level) {
    const DivisibilityTable t = divisibility_table(level, n_max);
    std::optional<std::size_t> first = t.first_one;
    for (std::size_t n = n_max + 1; !first && n <= bound; ++n)
      if (su_cyclic_order(n, level) == 1) first = n;
    Json row = json::write(t);
    row["first_one"] = first ? Json(*first) : Json("unproven@" + std::to_string(bound));
    o.data["rows"].push_back(std::move(row));
    text << level << " |";
    for (const auto& v : t.values) text << ' ' << v.get_str();
    text << " | " << (t.chain_ok ? "ok" : "FAIL") << " | "
         << (first ? std::to_string(*first) : "unproven@" + std::to_string(bound)) << '\n';
    if (!t.chain_ok) o.code = kCheckFailed;
  }
  o.table = text.str();
  return o;
}

Outcome cmd_chern(const Globals& g, const SpaceArgs& a, std::istream& in) {
  KResult k;
  std::uint64_t hp_dim = 0;
  std::string label;
  if (!a.space.empty()) {
    const TwistedSpace space = make_space(a);
    k = twisted_k(space, g.bound);
    const TwistedHP hp = twisted_hp(space, g.bound);
    hp_dim = hp.dims.total();
    label = space.describe();
  } else {
    const Json payload = read_payload(g, in);
    k.graded.total = json::read_group(json::require(payload, "k_total", "payload"), "payload.k_total");
    hp_dim = json::read_count(json::require(payload, "hp_dim", "payload"), "payload.hp_dim");
    label = "payload";
  }
  const ChernCheck c = chern_rank_check(k, hp_dim);
  Outcome o{json::write(c), "chern rank check for " + label + ": " + (c.pass ? "pass" : "FAIL") + " (" + c.details + ")",
            c.pass ? kOk : kCheckFailed};
  return o;
}

void emit(const Outcome& o, const Globals& g, std::ostream& out) {
  std::string text = g.format == "json" ? o.data.dump(2) : o.table;
  while (!text.empty() && text.back() == '\n') text.pop_back();
  if (g.output.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream f(g.output);
  if (!f) throw MalformedInput("--output: cannot write '" + g.output + "'");
  f << text << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with abelian groups, towers and twisted K-theory", "ktower"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  app.add_option("--bound", g.bound, "Certification bound for tower levels")
      ->default_val(kDefaultBound)
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  app.add_option("--format", g.format, "Output format")->default_val("table")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--output", g.output, "Write output to this file");
  app.add_option("--input", g.input, "Read the JSON payload from this file instead of stdin");

  auto* snf_cmd = app.add_subcommand("snf", "Smith normal form of a matrix payload");
  auto* group_cmd = app.add_subcommand("group", "Canonical form of a group, relation matrix or list of orders");
  auto* hom_cmd = app.add_subcommand("hom", "Kernel, image and cokernel of a homomorphism");
  auto* exact_cmd = app.add_subcommand("exact", "Exactness of a sequence of homomorphisms");

  TowerArgs targs;
  auto* tower_cmd = app.add_subcommand("tower", "Limits and verdicts for towers");
  tower_cmd->require_subcommand(1);
  std::map<CLI::App*, std::string> tower_subs;
  for (const char* name : {"lim", "lim1", "colim", "milnor", "ml", "chain"}) {
    auto* s = tower_cmd->add_subcommand(name);
    s->add_option("--builtin", targs.builtin, "Builtin tower name");
    s->add_option("--param", targs.params, "Builtin parameter key=value");
    if (std::string(name) == "chain") {
      s->add_option("--level", targs.level, "Target level")->required();
      s->add_option("--depth", targs.depth, "Number of steps above the level");
    }
    tower_subs[s] = name;
  }

  SpaceArgs sargs;
  auto add_space = [&sargs](CLI::App* cmd) {
    cmd->add_option("--space", sargs.space, "su, su-inf, s3 or s3-union");
    cmd->add_option("--n", sargs.n, "Rank parameter of SU(n)");
    cmd->add_option("--level", sargs.level, "Twist level");
    cmd->add_option("--twist", sargs.twist, "Twist of S^3");
  };
  auto* ktwist_cmd = app.add_subcommand("ktwist", "Twisted K-theory and K-homology");
  add_space(ktwist_cmd);
  ktwist_cmd->add_option("--truncate", sargs.truncate, "Finite stages shown for product and sum descriptors");
  ktwist_cmd->add_flag("--homology", sargs.homology, "K-homology instead of K-theory");
  ktwist_cmd->add_flag("--stabilize", sargs.stabilized, "Tensor with the compact operators");
  ktwist_cmd->add_option("--table", sargs.table, "Emit the c-table: n_max level_max")->expected(2);

  auto* hp_cmd = app.add_subcommand("hp", "Periodic cyclic homology dimensions");
  add_space(hp_cmd);
  hp_cmd->add_option("--truncate", sargs.truncate, "Truncation level for SU(inf)");
  hp_cmd->add_flag("--twisted", sargs.twisted, "Twisted HP at --level");

  ProductArgs pargs;
  auto* product_cmd = app.add_subcommand("product", "Truncated products and sums of a cyclic family");
  product_cmd->add_option("--family", pargs.family, "identity or constant")->check(CLI::IsMember({"identity", "constant"}));
  product_cmd->add_option("--value", pargs.value, "Order for the constant family");
  product_cmd->add_option("--n", pargs.n, "Truncation index");

  std::size_t n_max = 8, level_max = 8;
  auto* grid_cmd = app.add_subcommand("grid", "Table of c(n, level) with divisibility and first-1 columns");
  grid_cmd->add_option("--n-max", n_max, "Largest n");
  grid_cmd->add_option("--level-max", level_max, "Largest level");

  auto* chern_cmd = app.add_subcommand("chern", "Chern character rank check");
  add_space(chern_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << e.what() << '\n';
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    Outcome o;
    if (snf_cmd->parsed()) {
      o = cmd_snf(g, in);
    } else if (group_cmd->parsed()) {
      o = cmd_group(g, in);
    } else if (hom_cmd->parsed()) {
      o = cmd_hom(g, in);
    } else if (exact_cmd->parsed()) {
      o = cmd_exact(g, in);
    } else if (tower_cmd->parsed()) {
      for (const auto& [sub, name] : tower_subs)
        if (sub->parsed()) o = cmd_tower(name, g, targs, in);
    } else if (ktwist_cmd->parsed()) {
      o = cmd_ktwist(g, sargs);
    } else if (hp_cmd->parsed()) {
      o = cmd_hp(g, sargs);
    } else if (product_cmd->parsed()) {
      o = cmd_product(g, pargs);
    } else if (grid_cmd->parsed()) {
      o = grid_outcome(n_max, level_max, g.bound);
    } else if (chern_cmd->parsed()) {
      o = cmd_chern(g, sargs, in);
    }
    emit(o, g, out);
    return o.code;
  } catch (const Unresolved& e) {
    err << "unresolved: " << e.what() << '\n';
    return kUnproven;
  } catch (const BoundExceeded& e) {
    err << "bound exceeded: " << e.what() << '\n';
    return kUnproven;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace ktower::cli
