#include "cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ptkit::cli {

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("table row has the wrong width");
    bool finite = true;
    for (const Cell& c : row) {
        if (const double* v = std::get_if<double>(&c); v && !std::isfinite(*v)) finite = false;
    }
    if (!finite) {
        sentinel_rows.push_back(rows.size());
        for (std::size_t k = 1; k < row.size(); ++k) {
            if (std::holds_alternative<double>(row[k])) row[k] = std::nan("");
        }
    }
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_csv(const Table& t, std::ostream& os) {
    for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) os << ',';
            if (const double* v = std::get_if<double>(&row[k])) {
                os << format_number(*v);
            } else {
                os << std::get<std::string>(row[k]);
            }
        }
        os << '\n';
    }
}

json to_json(const Table& t) {
    json out;
    out["columns"] = t.columns;
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const Cell& c : row) {
            if (const double* v = std::get_if<double>(&c)) {
                if (std::isfinite(*v)) {
                    r.push_back(*v);
                } else {
                    r.push_back(nullptr);
                }
            } else {
                r.push_back(std::get<std::string>(c));
            }
        }
        rows.push_back(std::move(r));
    }
    out["rows"] = std::move(rows);
    return out;
}

}  // namespace ptkit::cli
