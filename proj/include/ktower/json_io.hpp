#pragma once

// JSON forms of the library's values. Arbitrary-precision integers are
// written as decimal strings; counts (ranks, dimensions, levels) as numbers.
// Readers accept either form for integers and report the offending field.

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ktower/cyclic.hpp"
#include "ktower/fgab.hpp"
#include "ktower/intlin.hpp"
#include "ktower/ktwist.hpp"
#include "ktower/towers.hpp"

namespace ktower::json {

using Json = nlohmann::json;

BigInt read_int(const Json& j, const std::string& field);
std::size_t read_count(const Json& j, const std::string& field);
const Json& require(const Json& j, const char* key, const std::string& field);

Json write(const BigInt& x);
Json write(const std::vector<BigInt>& xs);

IntMatrix read_matrix(const Json& j, const std::string& field = "matrix");
Json write(const IntMatrix& m);

FgAbGroup read_group(const Json& j, const std::string& field = "group");
Json write(const FgAbGroup& g);

Homomorphism read_hom(const Json& j, const std::string& field = "hom");
Json write(const Homomorphism& f);

std::vector<Homomorphism> read_sequence(const Json& j);
Json write_sequence(const std::vector<Homomorphism>& maps);

Json write(const SmithDecomposition& d);
Json write(const Subgroup& s);
Json write(const ExactnessReport& r);
Json write(const LimitDescriptor& d);
Json write(const Lim1Descriptor& d);
Json write(const MittagLefflerVerdict& v);
Json write(const TailClass& t);
/// Product/sum descriptors carry their first `truncations` finite stages.
Json write(const KDegree& d, std::size_t truncations = 5);
Json write(const KGradedGroup& g, std::size_t truncations = 5);
Json write(const KResult& k, std::size_t truncations = 5);
Json write(const GradedDims& d);
Json write(const Restriction& r);
Json write(const HpInverseSystem& s);
Json write(const ChernCheck& c);
Json write(const DivisibilityTable& t);

/// Parses a tower: either {"builtin": name, "params": {...}} or
/// {"prefix": [groups], "maps": [homs], "tail": "constant"|"finite"|"general",
///  "base": n}. For prefix towers with a non-constant tail the bound is
/// clamped to the last given level.
InverseTower read_inverse_tower(const Json& j, std::size_t bound);
DirectTower read_direct_tower(const Json& j, std::size_t bound);
/// {"builtin": ...} or {"even": tower, "odd": tower}.
GradedInverseTower read_graded_tower(const Json& j, std::size_t bound);

}  // namespace ktower::json
