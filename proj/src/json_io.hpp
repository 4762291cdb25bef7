#pragma once

#include <json.hpp>

#include "covmeas/harness.hpp"

namespace covmeas::detail {

using Json = nlohmann::ordered_json;

Json config_to_json(const RunConfig& c);
RunConfig config_from_json(const Json& j);

}  // namespace covmeas::detail
