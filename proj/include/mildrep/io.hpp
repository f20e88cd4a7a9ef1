#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mildrep/measure.hpp"

namespace mildrep {

/// {"atoms": [[x, m], ...]} with atoms sorted by position.
nlohmann::json measure_to_json(const DiscreteMeasure& mu);

/// Accepts any object with an "atoms" array of [x, m] pairs, in any order;
/// other keys are ignored. Throws DomainError on malformed input.
DiscreteMeasure measure_from_json(const nlohmann::json& j);

DiscreteMeasure read_measure_file(const std::filesystem::path& path);

/// Field quoted per RFC 4180 when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Shortest round-trip decimal form of a finite double.
std::string format_double(double v);

}  // namespace mildrep
