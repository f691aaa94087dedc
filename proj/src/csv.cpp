#include "quasireg/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace quasireg {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field");
    cells.emplace_back(trim(cell));
    return cells;
}

}  // namespace

double parse_double(std::string_view text) {
    const std::string_view t = trim(text);
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (!t.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
        throw ParseError(fmt::format("'{}' is not a finite number", text));
    return value;
}

std::size_t CsvTable::column_index(const std::string& name) const {
    std::size_t found = headers.size();
    for (std::size_t i = 0; i < headers.size(); ++i) {
        if (headers[i] != name) continue;
        if (found != headers.size()) throw ParseError(fmt::format("column '{}' appears more than once", name));
        found = i;
    }
    if (found == headers.size()) throw ParseError(fmt::format("no column named '{}'", name));
    return found;
}

Vector CsvTable::numeric_column(const std::string& name) const {
    const std::size_t idx = column_index(name);
    Vector out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        try {
            out.push_back(parse_double(rows[r][idx]));
        } catch (const ParseError& e) {
            throw ParseError(fmt::format("row {}, column '{}': {}", r + 2, name, e.what()));
        }
    }
    return out;
}

CsvTable parse_csv(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    CsvTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (table.headers.empty()) {
            table.headers = std::move(cells);
            continue;
        }
        if (cells.size() != table.headers.size())
            throw ParseError(fmt::format("line {}: expected {} fields, found {}", line_no, table.headers.size(),
                                         cells.size()));
        table.rows.push_back(std::move(cells));
    }
    if (table.headers.empty()) throw ParseError("empty CSV input");
    return table;
}

CsvTable read_csv(const std::string& path, std::string* raw) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(fmt::format("cannot open '{}'", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    CsvTable table = parse_csv(text);
    if (raw != nullptr) *raw = std::move(text);
    return table;
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

}  // namespace quasireg
