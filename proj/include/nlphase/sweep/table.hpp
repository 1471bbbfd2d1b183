#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nlphase::sweep {

using Cell = std::variant<double, long long, std::string>;

/// Column-labelled result table with key/value metadata.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_meta(std::string key, std::string value);
    void add_row(std::vector<Cell> row);

    /// Index of `column`; throws std::out_of_range if absent.
    std::size_t column_index(const std::string& column) const;
    double number(std::size_t row, const std::string& column) const;
};

/// Twelve significant digits, "nan"/"inf"/"-inf" for non-finite values.
std::string format_number(double value);

/// '#'-prefixed "key=value" metadata lines, a header row, then one line per row.
void write_csv(std::ostream& out, const Table& table);

/// {"meta": {...}, "rows": [{column: value, ...}, ...]}; numbers are rounded to
/// twelve significant digits and non-finite values become null.
void write_json(std::ostream& out, const Table& table);

}  // namespace nlphase::sweep
