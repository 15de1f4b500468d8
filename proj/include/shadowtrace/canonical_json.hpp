// Canonical JSON serialization: object keys sorted, floating point numbers
// rendered with 9 significant digits. The canonical form is a fixed point of
// parse/serialize, which keeps golden-file and determinism tests byte-stable.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace shadowtrace {

using json = nlohmann::json;

std::string dump_canonical(const json& value);

// One canonical JSON document per line, each terminated by '\n'.
std::string dump_canonical_lines(const std::vector<json>& records);

void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

// Parse with an ErrorCode::ParseError wrapper naming `context`.
json parse_json(const std::string& text, const std::string& context);

// Parse a JSON Lines buffer; blank lines are skipped, parse failures report
// the 1-based line number.
std::vector<json> parse_json_lines(const std::string& text, const std::string& context);

}  // namespace shadowtrace
