#include "abprop/table.hpp"

#include <json.hpp>

#include <cstdio>
#include <stdexcept>

namespace abprop {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("Table::add_row: cell count does not match columns");
    rows.push_back(std::move(row));
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string cell_to_csv(const Cell& cell) {
    if (std::holds_alternative<double>(cell)) return format_full(std::get<double>(cell));
    if (std::holds_alternative<long long>(cell))
        return std::to_string(std::get<long long>(cell));
    return std::get<std::string>(cell);
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += cell_to_csv(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Table& table) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (std::holds_alternative<double>(row[c]))
                obj[table.columns[c]] = std::get<double>(row[c]);
            else if (std::holds_alternative<long long>(row[c]))
                obj[table.columns[c]] = std::get<long long>(row[c]);
            else
                obj[table.columns[c]] = std::get<std::string>(row[c]);
        }
        arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
}

}  // namespace abprop
