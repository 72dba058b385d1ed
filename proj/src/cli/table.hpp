#pragma once

// Result tables written by the command line front end.

#include <json.hpp>

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace ptkit::cli {

using json = nlohmann::ordered_json;

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    /// Rows whose numeric fields were not all finite. Their numeric cells
    /// (except the first column) are written as nan.
    std::vector<std::size_t> sentinel_rows;

    void add(std::vector<Cell> row);
};

void write_csv(const Table& t, std::ostream& os);
/// {"columns": [...], "rows": [[...], ...]}; nan cells become null.
json to_json(const Table& t);

/// %.16e
std::string format_number(double v);

}  // namespace ptkit::cli
