#pragma once

// Named towers addressable from JSON and the command line.

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ktower/towers.hpp"

namespace ktower {

/// Inverse: z-times-2, z-times{factor}, p-adic{p}, constant{group},
/// su-k{level}, product{family, value}.
InverseTower builtin_inverse(const std::string& name, const nlohmann::json& params, std::size_t bound);
/// Direct: su-khom{level}, sum{family, value}, pruefer{p}, zero-maps{group},
/// constant{group}.
DirectTower builtin_direct(const std::string& name, const nlohmann::json& params, std::size_t bound);
/// Graded: su-k{level}.
GradedInverseTower builtin_graded(const std::string& name, const nlohmann::json& params, std::size_t bound);

std::vector<std::string> builtin_names(Direction d);

/// {"family": "identity"} (n -> n) or {"family": "constant", "value": m};
/// both accept "first".
CyclicFamily read_family(const nlohmann::json& params);

}  // namespace ktower
