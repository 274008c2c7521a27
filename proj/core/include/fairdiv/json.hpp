#pragma once

#include <nlohmann/json.hpp>

namespace fairdiv {

// Insertion-ordered so that identical inputs serialize byte-identically.
using Json = nlohmann::ordered_json;

}  // namespace fairdiv
