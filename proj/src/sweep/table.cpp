#include "nlphase/sweep/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nlphase::sweep {
namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    return csv_escape(std::get<std::string>(cell));
}

nlohmann::ordered_json cell_json(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        if (!std::isfinite(*d)) return nullptr;
        return std::stod(format_number(*d));
    }
    if (const auto* i = std::get_if<long long>(&cell)) return *i;
    return std::get<std::string>(cell);
}

}  // namespace

void Table::add_meta(std::string key, std::string value) {
    meta.emplace_back(std::move(key), std::move(value));
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::logic_error("row has " + std::to_string(row.size()) + " cells, table has " +
                               std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& column) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == column) return i;
    throw std::out_of_range("no column '" + column + "'");
}

double Table::number(std::size_t row, const std::string& column) const {
    const Cell& cell = rows.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&cell)) return *d;
    if (const auto* i = std::get_if<long long>(&cell)) return static_cast<double>(*i);
    throw std::invalid_argument("column '" + column + "' is not numeric");
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    std::string s(buf);
    return s == "-0" ? "0" : s;
}

void write_csv(std::ostream& out, const Table& table) {
    for (const auto& [key, value] : table.meta) out << "# " << key << '=' << value << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << csv_escape(table.columns[i]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table) {
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.meta) doc["meta"][key] = value;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
        doc["rows"].push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
}

}  // namespace nlphase::sweep
