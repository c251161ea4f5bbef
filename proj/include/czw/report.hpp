#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace czw {

struct ReportRow {
    std::string label;  // which inequality, for reports mixing several
    std::vector<std::pair<std::string, double>> coords;
    double lhs = 0.0;
    double rhs = 0.0;
    double implied = 0.0;  // lhs / rhs; 0 when both vanish, inf when only rhs does
    std::vector<std::string> flags;

    /// Rows flagged "degenerate" or "excluded" do not enter aggregates.
    bool counted() const;
};

/// lhs / rhs with the conventions above.
double implied_constant(double lhs, double rhs);

struct Contract {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    std::string theorem;
    nlohmann::ordered_json config;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, double>> aggregate;
    std::vector<Contract> contracts;
    // Lines appended to the CSV as `# ...` comments (slope fits and the like).
    std::vector<std::string> notes;

    void add_row(ReportRow row) { rows.push_back(std::move(row)); }
    void add_contract(std::string name, bool passed, std::string detail = {});
    void set_aggregate(const std::string& key, double value);
    double aggregate_value(const std::string& key) const;

    /// Largest implied constant over counted rows (0 if none).
    double max_implied() const;
    /// Smallest positive implied constant over counted rows (0 if none).
    double min_positive_implied() const;
    bool passed() const;

    nlohmann::ordered_json to_json() const;
    std::string to_csv() const;
    void write(const std::filesystem::path& json_path, const std::filesystem::path& csv_path) const;
};

/// Formats a double with 17 significant digits ("inf"/"nan" spelled out).
std::string format_number(double v);

/// Least-squares slope of y against x; NaN with fewer than two points.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace czw
