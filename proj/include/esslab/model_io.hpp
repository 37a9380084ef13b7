#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "esslab/geometry.hpp"

namespace esslab {

/// Parse a model definition:
///   {"kind": "euclidean|hyperbolic|cusp|warped-custom|gaussian-soliton|cylinder-soliton",
///    "n": int, "k": int?, "r_max": float, "warp_table": [[r, g], ...]?}
/// Throws FileFormatError with a "line:col" or "field 'x'" locator.
AnyModel parse_model_json(std::string_view text, const std::string& source = "<model>");

AnyModel load_model_file(const std::filesystem::path& path);

/// Compact description used by the `model` subcommand.
std::string describe_model_json(const AnyModel& model);

}  // namespace esslab
