#include "czw/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "czw/error.hpp"

namespace czw {

using nlohmann::ordered_json;

namespace {

ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

}  // namespace

bool ReportRow::counted() const {
    return std::none_of(flags.begin(), flags.end(), [](const std::string& f) {
        return f == "degenerate" || f == "excluded";
    });
}

double implied_constant(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs > 0.0 ? HUGE_VAL : 0.0;
}

void VerificationReport::add_contract(std::string name, bool passed, std::string detail) {
    contracts.push_back({std::move(name), passed, std::move(detail)});
}

void VerificationReport::set_aggregate(const std::string& key, double value) {
    for (auto& [k, v] : aggregate)
        if (k == key) {
            v = value;
            return;
        }
    aggregate.emplace_back(key, value);
}

double VerificationReport::aggregate_value(const std::string& key) const {
    for (const auto& [k, v] : aggregate)
        if (k == key) return v;
    throw DomainError("report has no aggregate named " + key);
}

double VerificationReport::max_implied() const {
    double out = 0.0;
    for (const auto& r : rows)
        if (r.counted()) out = std::max(out, r.implied);
    return out;
}

double VerificationReport::min_positive_implied() const {
    double out = 0.0;
    for (const auto& r : rows)
        if (r.counted() && r.implied > 0.0 && (out == 0.0 || r.implied < out)) out = r.implied;
    return out;
}

bool VerificationReport::passed() const {
    return std::all_of(contracts.begin(), contracts.end(), [](const Contract& c) { return c.passed; });
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

ordered_json VerificationReport::to_json() const {
    ordered_json j;
    j["theorem"] = theorem;
    j["config"] = config;
    j["metadata"] = metadata;
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row;
        if (!r.label.empty()) row["check"] = r.label;
        ordered_json coords = ordered_json::object();
        for (const auto& [k, v] : r.coords) coords[k] = number(v);
        row["coords"] = coords;
        row["lhs"] = number(r.lhs);
        row["rhs"] = number(r.rhs);
        row["implied_constant"] = number(r.implied);
        row["flags"] = r.flags;
        j["rows"].push_back(row);
    }
    ordered_json agg = ordered_json::object();
    for (const auto& [k, v] : aggregate) agg[k] = number(v);
    j["aggregate"] = agg;
    j["contracts"] = ordered_json::array();
    for (const auto& c : contracts)
        j["contracts"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["notes"] = notes;
    j["passed"] = passed();
    return j;
}

std::string VerificationReport::to_csv() const {
    std::ostringstream out;
    std::vector<std::string> keys;
    for (const auto& r : rows)
        for (const auto& [k, v] : r.coords)
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    const bool labelled =
        std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.label.empty(); });
    if (labelled) out << "check,";
    for (const auto& k : keys) out << k << ',';
    out << "lhs,rhs,implied_constant,flags\n";
    for (const auto& r : rows) {
        if (labelled) out << r.label << ',';
        for (const auto& k : keys) {
            auto it = std::find_if(r.coords.begin(), r.coords.end(),
                                   [&](const auto& kv) { return kv.first == k; });
            if (it != r.coords.end()) out << format_number(it->second);
            out << ',';
        }
        out << format_number(r.lhs) << ',' << format_number(r.rhs) << ','
            << format_number(r.implied) << ',';
        for (std::size_t i = 0; i < r.flags.size(); ++i) out << (i ? ";" : "") << r.flags[i];
        out << '\n';
    }
    for (const auto& [k, v] : aggregate) out << "# " << k << " = " << format_number(v) << '\n';
    for (const auto& n : notes) out << "# " << n << '\n';
    return out.str();
}

void VerificationReport::write(const std::filesystem::path& json_path,
                               const std::filesystem::path& csv_path) const {
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw IoError("cannot write " + json_path.string());
        out << to_json().dump(2) << '\n';
        if (!out) throw IoError("write failed: " + json_path.string());
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw IoError("cannot write " + csv_path.string());
        out << to_csv();
        if (!out) throw IoError("write failed: " + csv_path.string());
    }
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("fit_slope: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) return std::nan("");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::nan("");
}

}  // namespace czw
