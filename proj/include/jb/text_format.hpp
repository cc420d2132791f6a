#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace jb::text {

/// 17 significant digits, C-locale, round-trips any binary64 value.
[[nodiscard]] std::string format_exact(double x);

/// Shortest decimal text that parses back to exactly x.
[[nodiscard]] std::string format_shortest(double x);

/// printf-style %.{digits}g; digits == 0 selects format_shortest.
[[nodiscard]] std::string format_general(double x, int digits);

/// Locale-independent full-string parse; throws InvalidArgument on junk.
[[nodiscard]] double parse_double(std::string_view text);
[[nodiscard]] std::int64_t parse_int(std::string_view text);
[[nodiscard]] std::uint64_t parse_uint(std::string_view text);

[[nodiscard]] std::vector<std::string_view> split(std::string_view text, char sep);

/// FNV-1a, 64-bit.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes);
[[nodiscard]] std::string hex64(std::uint64_t value);

}  // namespace jb::text
