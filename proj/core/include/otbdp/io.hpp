#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "otbdp/measures.hpp"
#include "otbdp/sdot.hpp"
#include "otbdp/types.hpp"

namespace otbdp {

inline constexpr int kSchemaVersion = 1;

/// Comma-separated reals, e.g. "0.3,0.4". Throws ParseError.
std::vector<double> parse_doubles(std::string_view text);
/// Comma-separated non-negative integers. Throws ParseError.
std::vector<std::size_t> parse_indices(std::string_view text);

/// CSV rows `x1,...,xd[,weight]`. A header line and `#` comments are
/// skipped; the weight column is present when the header's last field is
/// `weight` (or `w`). Without weights the target is empirical.
DiscreteMeasure parse_atoms_csv(std::string_view text);
/// JSON object {"atoms": [[...], ...], "weights": [...]} (weights optional).
DiscreteMeasure parse_atoms_json(std::string_view text);
/// Dispatches on the extension (.json, anything else is CSV).
/// Throws IoError and ParseError.
DiscreteMeasure read_atoms(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Serialized map: reference, atoms, lambda, atom-frame weights (w_1 = 0),
/// shift, site weights and residual. `map_from_json(map_to_json(m))`
/// classifies every point as `m` does.
std::string map_to_json(const TransportMap& map);
TransportMap map_from_json(std::string_view text);

}  // namespace otbdp
