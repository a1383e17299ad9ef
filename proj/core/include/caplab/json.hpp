#pragma once

#include <json.hpp>

namespace caplab {

// Ordered maps keep report output byte-stable across runs.
using Json = nlohmann::ordered_json;

}  // namespace caplab
