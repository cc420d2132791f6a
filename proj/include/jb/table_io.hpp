#pragma once

#include <iosfwd>
#include <string>

#include "jb/quantile_table.hpp"

namespace jb {

/**
 * Text persistence for QuantileTable (see FORMAT.md).
 *
 * The layout is a magic line, `key=value` header lines, a `[body]` block of
 * comma-separated rows (one per kind and p, values across the n grid at 17
 * significant digits), `[end]`, and a FNV-1a checksum of the body bytes.
 * Output is canonical: saving the same table twice gives identical bytes.
 */
void save_table(const QuantileTable& table, std::ostream& out);
[[nodiscard]] std::string table_to_string(const QuantileTable& table);

/// Throws DataError with "unsupported format", "corrupt table" or
/// "invalid table" in the message.
[[nodiscard]] QuantileTable load_table(std::istream& in);
[[nodiscard]] QuantileTable table_from_string(const std::string& text);

void save_table_file(const QuantileTable& table, const std::string& path);
[[nodiscard]] QuantileTable load_table_file(const std::string& path);

}  // namespace jb
