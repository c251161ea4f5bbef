#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "czw/grid.hpp"
#include "czw/singular.hpp"
#include "czw/weights.hpp"

namespace czw {

enum class Theorem { Strong, Endpoint, Corollary, TwoWeight, Sharp, MaximalLemmas };

std::string to_string(Theorem t);
/// "strong", "endpoint", "corollary", "two-weight", "sharp", "maximal-lemmas".
Theorem parse_theorem(const std::string& text);

struct GridConfig {
    double a = -4.0;
    double b = 4.0;
    int levels = 10;
    UniformGrid make() const { return UniformGrid(a, b, levels); }
};

/// Input function f.
///   indicator     scale * chi_[lo, hi)
///   bump          scale * (1 - t^2)^2 with t = (x - c)/r on [lo, hi]
///   random_step   16 equal pieces on [lo, hi) with seeded values in [0, scale)
///   constant      scale everywhere
///   zero
struct InputConfig {
    std::string kind = "indicator";
    double lo = 0.0;
    double hi = 1.0;
    double scale = 1.0;
    std::uint64_t seed = 0;

    GridFunction make(const UniformGrid& grid) const;
};

struct SymbolConfig {
    std::string kind = "log";
    double s = 1.0;          // Osc_{exp L^s} exponent; also the abslog_power parameter
    double value = 1.0;      // constant symbols
    std::uint64_t seed = 0;  // random_bmo

    SymbolSpec spec() const;
};

struct ExperimentConfig {
    GridConfig grid;
    InputConfig input;
    std::vector<SymbolConfig> symbols{SymbolConfig{}};
    WeightSpec weight{WeightKind::Power, -0.25, 0, 1.0};
    Theorem theorem = Theorem::Strong;
    std::vector<double> p{1.5, 2.0, 3.0};
    std::vector<double> delta{0.1, 0.5};
    std::vector<double> epsilon{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> lambda{0.05, 0.1, 0.2};
    std::vector<int> resolution{8, 9, 10};  // grid levels for the resolution sweep axis
    std::string mode = "auto";
    std::uint64_t seed = 0;
    double slope_tolerance = 0.3;
    std::size_t stride = 0;  // seminorm interval lattice; 0 = automatic

    /// Throws ConfigError on invalid values.
    void validate() const;
};

nlohmann::ordered_json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical configurations: f = chi_[0,1) on [-4, 4], b = log (s = 1),
/// w = power(-1/4), n = 2^10.
ExperimentConfig canonical_config(Theorem theorem);

std::string weight_kind_name(WeightKind kind);
WeightKind parse_weight_kind(const std::string& text);

}  // namespace czw
