#ifndef ABPROP_TABLE_HPP
#define ABPROP_TABLE_HPP

#include <string>
#include <variant>
#include <vector>

namespace abprop {

using Cell = std::variant<double, long long, std::string>;

/// Column-ordered table with typed cells; the two writers preserve the full
/// precision of every double (17 significant digits round-trip).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

std::string format_full(double v);  // %.17g

std::string to_csv(const Table& table);   // header line first, LF endings
std::string to_json(const Table& table);  // array of flat objects

}  // namespace abprop

#endif
