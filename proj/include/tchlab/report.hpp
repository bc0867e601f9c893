#pragma once

// Structured experiment output: named numeric tables plus a JSON parameter/summary record.

#include <json.hpp>

#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tch {

inline constexpr const char* kVersion = "0.1.0";

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    // Throws std::invalid_argument when the row arity does not match the schema.
    void add_row(std::vector<double> row);
    std::size_t column(const std::string& col) const;
};

struct ExperimentReport {
    std::string experiment;
    nlohmann::json parameters = nlohmann::json::object();
    std::deque<Table> tables;  // references from add_table stay valid
    nlohmann::json summary = nlohmann::json::object();
    std::string version = kVersion;
    std::optional<std::uint64_t> seed;

    Table& add_table(std::string name, std::vector<std::string> columns);
    const Table& table(const std::string& name) const;

    // {"experiment", "version", "seed", "parameters", "summary"}; tables are written separately.
    nlohmann::json to_json() const;
};

// 17 significant digits, enough to round-trip any double.
std::string format_double(double x);

void write_csv(const Table& table, const std::filesystem::path& path);
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace tch
