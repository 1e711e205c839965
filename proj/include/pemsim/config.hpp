#pragma once

#include <cstdint>
#include <string>

#include "pemsim/parameters.hpp"

namespace pemsim {

struct Configuration {
    ParameterSet params;
    OperatingConditions oc;
};

// Parses the INI-style configuration (sections [geometry], [membrane],
// [porous], [kinetics], [water], [bop], [ambient], [operating]). Unlisted
// keys default to the EH-31 values; unknown keys or sections are errors.
Configuration load_config(const std::string& path);
Configuration parse_config(const std::string& text, const std::string& origin = "<string>");

// Serializes every field in the canonical section/key order.
std::string dump_config(const Configuration& config);

// FNV-1a hash of the canonical serialization; stable across runs.
std::uint64_t config_hash(const Configuration& config);

} // namespace pemsim
