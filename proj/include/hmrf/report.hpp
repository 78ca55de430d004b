#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace hmrf {

std::string library_version();

/// 64-bit FNV-1a of the canonical (sorted-key, compact) JSON text, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// JSON real that keeps infinities and NaN representable as strings.
nlohmann::json json_number(double v);

/// Shortest text that reads back to the same double.
std::string format_real(double v);

/// One RFC-4180 record terminated by CRLF; fields quoted when needed.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Pretty-printed JSON with a trailing newline; throws std::runtime_error on I/O failure.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace hmrf
