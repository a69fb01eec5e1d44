#pragma once

#include <string>

#include "ahwarp/search.hpp"
#include "ahwarp/stable.hpp"

namespace ahwarp {

/// Pretty-printed JSON with shortest round-trip numbers.
std::string report_to_json(const ScanReport& rep);
/// Throws ParameterError on malformed input.
ScanReport report_from_json(const std::string& text);

std::string stable_to_json(const StableSolution& y);

}  // namespace ahwarp
