#include "ktower/builtins.hpp"

#include "ktower/error.hpp"
#include "ktower/json_io.hpp"
#include "ktower/ktwist.hpp"

namespace ktower {

namespace {

using json::Json;

BigInt int_param(const Json& params, const char* key, std::optional<BigInt> fallback = std::nullopt) {
  if (params.contains(key)) return json::read_int(params[key], std::string("params.") + key);
  if (fallback) return *fallback;
  throw MalformedInput(std::string("params.") + key + ": missing");
}

BigInt positive_param(const Json& params, const char* key, std::optional<BigInt> fallback = std::nullopt) {
  BigInt x = int_param(params, key, std::move(fallback));
  if (x < 1) throw OutOfRange(std::string("params.") + key + ": must be >= 1");
  return x;
}

std::uint64_t level_param(const Json& params) {
  const BigInt x = positive_param(params, "level");
  if (!x.fits_ulong_p()) throw OutOfRange("params.level: too large");
  return x.get_ui();
}

FgAbGroup group_param(const Json& params) {
  return json::read_group(json::require(params, "group", "params"), "params.group");
}

[[noreturn]] void unknown(const std::string& name, Direction d) {
  std::string msg = "unknown builtin tower '" + name + "'; available:";
  for (const auto& n : builtin_names(d)) msg += " " + n;
  throw MalformedInput(msg);
}

}  // namespace

CyclicFamily read_family(const Json& params) {
  const std::string kind = params.contains("family") ? params["family"].get<std::string>() : "identity";
  const std::size_t first = params.contains("first") ? json::read_count(params["first"], "params.first") : 1;
  if (first < 1) throw OutOfRange("params.first: must be >= 1");
  if (kind == "identity") return CyclicFamily::identity(first);
  if (kind == "constant") return CyclicFamily::constant(positive_param(params, "value"), first);
  throw MalformedInput("params.family: expected \"identity\" or \"constant\", got '" + kind + "'");
}

std::vector<std::string> builtin_names(Direction d) {
  if (d == Direction::Inverse) return {"constant", "p-adic", "product", "su-k", "z-times", "z-times-2"};
  return {"constant", "pruefer", "su-khom", "sum", "zero-maps"};
}

InverseTower builtin_inverse(const std::string& name, const Json& params, std::size_t bound) {
  if (name == "z-times-2") return builtin::z_times(2, bound);
  if (name == "z-times") return builtin::z_times(int_param(params, "factor"), bound);
  if (name == "p-adic") return builtin::p_adic(positive_param(params, "p"), bound);
  if (name == "constant") return builtin::constant_inverse(group_param(params), bound);
  if (name == "su-k") return su_k_total_tower(level_param(params), bound);
  if (name == "product") return builtin::product_tower(read_family(params), bound);
  unknown(name, Direction::Inverse);
}

DirectTower builtin_direct(const std::string& name, const Json& params, std::size_t bound) {
  if (name == "su-khom") return su_khomology_total_tower(level_param(params), bound);
  if (name == "sum") return builtin::sum_tower(read_family(params), bound);
  if (name == "pruefer") return builtin::pruefer(positive_param(params, "p"), bound);
  if (name == "zero-maps") return builtin::zero_maps(group_param(params), bound);
  if (name == "constant") return builtin::constant_direct(group_param(params), bound);
  unknown(name, Direction::Direct);
}

GradedInverseTower builtin_graded(const std::string& name, const Json& params, std::size_t bound) {
  if (name == "su-k") return su_k_graded_tower(level_param(params), bound);
  throw MalformedInput("unknown graded builtin '" + name + "'; available: su-k");
}

}  // namespace ktower
