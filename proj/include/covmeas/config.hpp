#pragma once

#include <string>
#include <string_view>

#include "covmeas/harness.hpp"

namespace covmeas {

/// Line-oriented `key = value` text with [protocol] and [run] sections
/// ('#' and ';' start comments), or a JSON object with the same two
/// sections. Unknown sections or keys throw DomainError.
RunConfig parse_run_config(std::string_view text);
/// Throws IoError if the file cannot be read.
RunConfig load_run_config(const std::string& path);
std::string format_run_config(const RunConfig& config);

}  // namespace covmeas
