#include "tchlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace tch {

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("row arity " + std::to_string(row.size()) + " does not match table " + name);
    rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& col) const {
    for (std::size_t k = 0; k < columns.size(); ++k)
        if (columns[k] == col) return k;
    throw std::out_of_range("no column " + col + " in table " + name);
}

Table& ExperimentReport::add_table(std::string name, std::vector<std::string> columns) {
    tables.push_back({std::move(name), std::move(columns), {}});
    return tables.back();
}

const Table& ExperimentReport::table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return t;
    throw std::out_of_range("no table " + name);
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["version"] = version;
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["parameters"] = parameters;
    j["summary"] = summary;
    return j;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const Table& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t k = 0; k < table.columns.size(); ++k) out << (k ? "," : "") << table.columns[k];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
        out << '\n';
    }
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace tch
