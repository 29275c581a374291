#pragma once

#include <string>

#include <json.hpp>

namespace seqrad {

/// Serialize with every float printed at 17 significant digits: byte-stable
/// across runs and round-trip exact. Rejects non-finite numbers.
std::string dump_json(const nlohmann::ordered_json& doc, int indent = 2);

}  // namespace seqrad
