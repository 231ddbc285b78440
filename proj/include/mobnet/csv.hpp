// Small helpers shared by the loaders and report writers: headerless CSV
// splitting, strict number parsing, shortest round-trip double formatting.
#ifndef MOBNET_CSV_HPP
#define MOBNET_CSV_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mobnet::csv {

// Splits one line on commas, trimming surrounding whitespace per field.
std::vector<std::string> split(std::string_view line);

std::optional<double> parse_double(std::string_view field);
std::optional<int64_t> parse_int(std::string_view field);

// Shortest representation that round-trips (std::to_chars).
std::string format_double(double v);

struct RowIssue {
    size_t line = 0;  // 1-based input line number
    std::string message;
};

/// Per-file load accounting: accepted + skipped == data rows seen.
struct LoadReport {
    size_t rows_total = 0;
    size_t rows_accepted = 0;
    size_t rows_skipped = 0;
    std::vector<RowIssue> issues;

    void skip(size_t line, std::string message);
};

}  // namespace mobnet::csv

#endif
