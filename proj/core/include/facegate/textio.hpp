#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace facegate {

// Locale-independent numeric formatting. All machine-readable outputs go
// through these so byte-identical replay holds.
std::string format_g(double v, int significant_digits);

// %.17g — round-trips any double exactly.
inline std::string format_full(double v) { return format_g(v, 17); }

// Strict full-token parses via std::from_chars; nullopt on any trailing junk.
std::optional<double> parse_double(std::string_view tok);
std::optional<long long> parse_int(std::string_view tok);

std::vector<std::string> split(std::string_view line, char delim);
std::vector<std::string> split_ws(std::string_view line);
std::string_view trim(std::string_view s);

// FNV-1a 64-bit, used as the model-file checksum.
std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t v);

std::string read_text_file(const std::string& path);           // throws IoError
void write_text_file(const std::string& path, std::string_view content);  // throws IoError

}  // namespace facegate
