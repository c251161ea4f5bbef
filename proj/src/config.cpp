#include "czw/config.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "czw/error.hpp"

namespace czw {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(Theorem t) {
    switch (t) {
        case Theorem::Strong: return "strong";
        case Theorem::Endpoint: return "endpoint";
        case Theorem::Corollary: return "corollary";
        case Theorem::TwoWeight: return "two-weight";
        case Theorem::Sharp: return "sharp";
        case Theorem::MaximalLemmas: return "maximal-lemmas";
    }
    return "unknown";
}

Theorem parse_theorem(const std::string& text) {
    for (Theorem t : {Theorem::Strong, Theorem::Endpoint, Theorem::Corollary, Theorem::TwoWeight,
                      Theorem::Sharp, Theorem::MaximalLemmas})
        if (text == to_string(t)) return t;
    throw ConfigError("unknown theorem: " + text);
}

std::string weight_kind_name(WeightKind kind) {
    switch (kind) {
        case WeightKind::Constant: return "constant";
        case WeightKind::Step: return "step";
        case WeightKind::Power: return "power";
        case WeightKind::LogLike: return "loglike";
        case WeightKind::RandomAInf: return "random_ainf";
    }
    return "unknown";
}

WeightKind parse_weight_kind(const std::string& text) {
    for (WeightKind k : {WeightKind::Constant, WeightKind::Step, WeightKind::Power,
                         WeightKind::LogLike, WeightKind::RandomAInf})
        if (text == weight_kind_name(k)) return k;
    throw ConfigError("unknown weight kind: " + text);
}

GridFunction InputConfig::make(const UniformGrid& grid) const {
    if (kind == "zero") return GridFunction(grid);
    if (kind == "constant") return GridFunction::constant(grid, scale);
    if (!(lo < hi)) throw ConfigError("input: need lo < hi");
    if (kind == "indicator")
        return GridFunction::sample(grid, [&](double x) { return x >= lo && x < hi ? scale : 0.0; });
    if (kind == "bump") {
        const double c = 0.5 * (lo + hi);
        const double r = 0.5 * (hi - lo);
        return GridFunction::sample(grid, [&](double x) {
            const double t = (x - c) / r;
            return std::abs(t) < 1.0 ? scale * (1.0 - t * t) * (1.0 - t * t) : 0.0;
        });
    }
    if (kind == "random_step") {
        std::mt19937_64 rng(seed);
        std::vector<double> level(16);
        for (double& v : level) v = scale * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return GridFunction::sample(grid, [&](double x) {
            if (!(x >= lo && x < hi)) return 0.0;
            const auto piece = static_cast<std::size_t>(16.0 * (x - lo) / (hi - lo));
            return level[std::min<std::size_t>(piece, 15)];
        });
    }
    throw ConfigError("unknown input kind: " + kind);
}

SymbolSpec SymbolConfig::spec() const {
    auto out = SymbolSpec::parse(kind, s, seed);
    out.value = value;
    return out;
}

void ExperimentConfig::validate() const {
    if (!(grid.a < grid.b) || grid.levels < 1 || grid.levels > 24)
        throw ConfigError("grid: need a < b and levels in [1, 24]");
    for (double v : lambda)
        if (!(v > 0.0)) throw ConfigError("every lambda must be > 0");
    for (double v : delta)
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("every delta must lie in (0, 1)");
    for (double v : epsilon)
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("every epsilon must lie in (0, 1)");
    for (double v : p)
        if (!(v > 1.0) || !std::isfinite(v)) throw ConfigError("every p must be > 1");
    for (int r : resolution)
        if (r < 1 || r > 24) throw ConfigError("resolution levels must lie in [1, 24]");
    for (const auto& s : symbols)
        if (!(s.s >= 1.0)) throw ConfigError("every symbol s must be >= 1");
    if (!(slope_tolerance >= 0.0)) throw ConfigError("slope_tolerance must be >= 0");
    (void)parse_mode(mode, std::size_t{1} << grid.levels);
}

ordered_json to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["grid"] = {{"a", cfg.grid.a}, {"b", cfg.grid.b}, {"levels", cfg.grid.levels}};
    j["input"] = {{"kind", cfg.input.kind},   {"lo", cfg.input.lo},     {"hi", cfg.input.hi},
                  {"scale", cfg.input.scale}, {"seed", cfg.input.seed}};
    j["symbols"] = ordered_json::array();
    for (const auto& s : cfg.symbols)
        j["symbols"].push_back(
            {{"kind", s.kind}, {"s", s.s}, {"value", s.value}, {"seed", s.seed}});
    j["weight"] = {{"kind", weight_kind_name(cfg.weight.kind)},
                   {"alpha", cfg.weight.alpha},
                   {"seed", cfg.weight.seed},
                   {"bound", cfg.weight.oscillation}};
    j["theorem"] = to_string(cfg.theorem);
    j["p"] = cfg.p;
    j["delta"] = cfg.delta;
    j["epsilon"] = cfg.epsilon;
    j["lambda"] = cfg.lambda;
    j["resolution"] = cfg.resolution;
    j["mode"] = cfg.mode;
    j["seed"] = cfg.seed;
    j["slope_tolerance"] = cfg.slope_tolerance;
    j["stride"] = cfg.stride;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    try {
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            cfg.grid.a = g.value("a", cfg.grid.a);
            cfg.grid.b = g.value("b", cfg.grid.b);
            cfg.grid.levels = g.value("levels", cfg.grid.levels);
        }
        if (j.contains("input")) {
            const auto& in = j.at("input");
            cfg.input.kind = in.value("kind", cfg.input.kind);
            cfg.input.lo = in.value("lo", cfg.input.lo);
            cfg.input.hi = in.value("hi", cfg.input.hi);
            cfg.input.scale = in.value("scale", cfg.input.scale);
            cfg.input.seed = in.value("seed", cfg.input.seed);
        }
        if (j.contains("symbols")) {
            cfg.symbols.clear();
            for (const auto& s : j.at("symbols")) {
                SymbolConfig sc;
                sc.kind = s.value("kind", sc.kind);
                sc.s = s.value("s", sc.s);
                sc.value = s.value("value", sc.value);
                sc.seed = s.value("seed", sc.seed);
                cfg.symbols.push_back(sc);
            }
        }
        if (j.contains("weight")) {
            const auto& w = j.at("weight");
            cfg.weight.kind = parse_weight_kind(w.value("kind", std::string("power")));
            cfg.weight.alpha = w.value("alpha", cfg.weight.alpha);
            cfg.weight.seed = w.value("seed", cfg.weight.seed);
            cfg.weight.oscillation = w.value("bound", cfg.weight.oscillation);
        }
        if (j.contains("theorem")) cfg.theorem = parse_theorem(j.at("theorem").get<std::string>());
        cfg.p = j.value("p", cfg.p);
        cfg.delta = j.value("delta", cfg.delta);
        cfg.epsilon = j.value("epsilon", cfg.epsilon);
        cfg.lambda = j.value("lambda", cfg.lambda);
        cfg.resolution = j.value("resolution", cfg.resolution);
        cfg.mode = j.value("mode", cfg.mode);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.slope_tolerance = j.value("slope_tolerance", cfg.slope_tolerance);
        cfg.stride = j.value("stride", cfg.stride);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

ExperimentConfig canonical_config(Theorem theorem) {
    ExperimentConfig cfg;
    cfg.theorem = theorem;
    switch (theorem) {
        case Theorem::Endpoint:
            cfg.lambda = {0.1};
            break;
        case Theorem::Corollary:
            cfg.lambda = {0.05, 0.1, 0.2};
            break;
        case Theorem::Sharp:
            cfg.delta = {0.25};
            cfg.epsilon = {0.5};
            break;
        case Theorem::MaximalLemmas:
            cfg.symbols.clear();
            cfg.p = {1.5, 2.0, 3.0};
            cfg.delta = {0.5};
            cfg.epsilon = {0.5};
            break;
        case Theorem::Strong:
        case Theorem::TwoWeight:
            break;
    }
    return cfg;
}

}  // namespace czw
