#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "quasireg/matrix.hpp"

namespace quasireg {

/// Comma-separated table with a header row. Cells are kept as text; numeric
/// conversion uses the C locale regardless of the environment.
struct CsvTable {
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const;
    /// Throws ParseError when the column is missing, ambiguous or non-numeric.
    Vector numeric_column(const std::string& name) const;
};

CsvTable parse_csv(std::string_view text);
/// Reads and parses a file; `raw` receives the bytes read when non-null.
CsvTable read_csv(const std::string& path, std::string* raw = nullptr);

double parse_double(std::string_view text);

/// 64-bit FNV-1a of `bytes`, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace quasireg
