// cz: command-line front end for the weighted Calderon-Zygmund workbench.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <algorithm>
#include <vector>
#include <random>
#include <string>

#include <json.hpp>

#include "czw/config.hpp"
#include "czw/czrf.hpp"
#include "czw/error.hpp"
#include "czw/grid.hpp"
#include "czw/harness.hpp"
#include "czw/maximal.hpp"
#include "czw/orlicz.hpp"
#include "czw/singular.hpp"
#include "czw/weights.hpp"
#include "czw/young.hpp"

namespace fs = std::filesystem;
using namespace czw;

namespace {

YoungSpec parse_family(const std::string& family, double param) {
    YoungSpec spec;
    if (family == "phi") spec = YoungSpec::phi(param);
    else if (family == "psi") spec = YoungSpec::psi(param);
    else if (family == "x") spec = YoungSpec::x(param);
    else if (family == "x_tilde") spec = YoungSpec::x_tilde(param);
    else if (family == "power") spec = YoungSpec::power(param);
    else if (family == "identity") spec = YoungSpec::identity();
    else throw ConfigError("unknown family: " + family);
    spec.validate();
    return spec;
}

double unit_open(std::mt19937_64& rng) {
    // (0, 1): never returns 0.
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

void print(double v) { std::cout << std::setprecision(17) << v << '\n'; }

fs::path csv_beside(const fs::path& json_path) {
    fs::path p = json_path;
    p.replace_extension(".csv");
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical workbench for weighted Calderon-Zygmund estimates"};
    app.require_subcommand(1);

    // eval
    std::string family = "phi";
    double param = 1.0;
    double t = 1.0;
    auto* eval = app.add_subcommand("eval", "Evaluate a Young-type function");
    eval->add_option("--family", family, "phi | psi | x | x_tilde | power | identity");
    eval->add_option("--rho,--s,--r,--param", param, "Family parameter");
    eval->add_option("--t", t, "Argument")->required();

    // check
    std::string which;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    auto* check = app.add_subcommand("check", "Randomized check of the scalar composition bounds");
    check->add_option("bound", which, "x-of-phi | phi-of-x-tilde")->required();
    check->add_option("--samples", samples);
    check->add_option("--seed", seed);

    // norm
    fs::path input;
    std::size_t begin = 0;
    std::size_t end = 0;
    bool primed = false;
    auto* norm = app.add_subcommand("norm", "Luxemburg norm of a grid function on an interval");
    norm->add_option("--input", input)->required();
    std::string family_setting;
    std::vector<double> interval;
    norm->add_option("--family", family);
    norm->add_option("--rho,--s,--r,--param", param);
    std::string psi_setting;
    norm->add_option("--phi", family_setting, "Phi_rho shorthand, e.g. rho=1");
    norm->add_option("--psi", psi_setting, "Psi_s shorthand, e.g. s=2");
    norm->add_option("--interval", interval, "Interval endpoints x0,x1 (snapped to cells)")
        ->delimiter(',')
        ->expected(2);
    norm->add_option("--begin", begin, "First cell (default 0)");
    norm->add_option("--end", end, "One past the last cell (default n)");
    norm->add_flag("--primed", primed, "Use the inf_mu equivalent norm");

    // maximal
    std::string op = "hl";
    std::string mode_text = "auto";
    fs::path out;
    double exponent = 1.0;
    auto* maximal = app.add_subcommand("maximal", "Maximal operators of a grid function");
    maximal->add_option("--input", input)->required();
    maximal->add_option("--op", op, "hl | power | sharp | sharp-power | orlicz");
    maximal->add_option("--family", family);
    maximal->add_option("--rho,--s,--r,--param", param);
    maximal->add_option("--exponent,--eps,--delta", exponent, "eps for power, delta for sharp-power");
    maximal->add_option("--mode", mode_text, "all-intervals | dyadic | auto");
    maximal->add_option("--out", out)->required();

    // weights
    double tau = kCalibratedTau;
    std::string weight_kind;
    double alpha = -0.5;
    double bound = 1.0;
    std::vector<double> p_list{2.0};
    fs::path report_path;
    int levels = 10;
    double a = -1.0;
    double b = 1.0;
    auto* weights = app.add_subcommand("weights", "Muckenhoupt-type constants of a weight");
    weights->add_option("--input", input, "Weight as CSV");
    weights->add_option("--kind", weight_kind, "constant | step | power | loglike | random_ainf");
    weights->add_option("--alpha", alpha);
    weights->add_option("--seed", seed);
    weights->add_option("--bound", bound);
    weights->add_option("--levels", levels);
    weights->add_option("--a", a);
    weights->add_option("--b", b);
    weights->add_option("--p", p_list, "A_p exponents")->delimiter(',');
    weights->add_option("--tau", tau);
    weights->add_option("--mode", mode_text);
    weights->add_option("--report", report_path, "JSON output (default: stdout)");

    // apply
    std::string symbol = "log";
    double symbol_s = 1.0;
    auto* apply = app.add_subcommand("apply", "Apply the Hilbert transform or a commutator");
    apply->add_option("--op", op, "hilbert | commutator")->required();
    apply->add_option("--symbol", symbol, "constant | log | abslog_power | step_bmo | random_bmo");
    apply->add_option("--symbol-s", symbol_s);
    apply->add_option("--seed", seed);
    apply->add_option("--input", input)->required();
    apply->add_option("--out", out)->required();

    // decompose
    double lambda = 1.0;
    std::string prefix = "cz_";
    auto* decompose = app.add_subcommand("decompose", "Calderon-Zygmund decomposition at height lambda");
    decompose->add_option("--lambda", lambda)->required();
    decompose->add_option("--input", input)->required();
    decompose->add_option("--out-prefix", prefix);

    // verify
    std::string theorem;
    fs::path config_path;
    fs::path csv_out;
    auto* verify_cmd = app.add_subcommand("verify", "Check an inequality and report implied constants");
    verify_cmd->add_option("--theorem", theorem,
                           "strong | endpoint | corollary | two-weight | sharp | maximal-lemmas");
    verify_cmd->add_option("--config", config_path);
    verify_cmd->add_option("--out", out)->required();
    verify_cmd->add_option("--csv", csv_out, "CSV path (default: --out with .csv extension)");

    // sweep
    std::string axis;
    fs::path json_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a configuration across one parameter axis");
    sweep_cmd->add_option("--axis", axis, "epsilon | delta | p | resolution")->required();
    sweep_cmd->add_option("--config", config_path)->required();
    sweep_cmd->add_option("--theorem", theorem, "Overrides the config's theorem");
    sweep_cmd->add_option("--out", out, "CSV output")->required();
    sweep_cmd->add_option("--json", json_out);

    // calibrate-tau
    double safety = 2.0;
    auto* calibrate = app.add_subcommand("calibrate-tau",
                                         "Calibrate the reverse Hoelder tau on the weight menu");
    calibrate->add_option("--levels", levels);
    calibrate->add_option("--a", a);
    calibrate->add_option("--b", b);
    calibrate->add_option("--safety", safety);
    calibrate->add_option("--mode", mode_text);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval) {
            print(evaluate(parse_family(family, param), t));
        } else if (*check) {
            std::mt19937_64 rng(seed);
            std::size_t violations = 0;
            std::size_t total = 0;
            if (which == "x-of-phi") {
                for (std::size_t i = 0; i < samples; ++i, ++total) {
                    const double ti = 1e6 * unit_open(rng);
                    const double rho = 10.0 * unit_open(rng);
                    if (!check_x_of_phi(ti, rho).ordered()) ++violations;
                }
            } else if (which == "phi-of-x-tilde") {
                for (std::size_t i = 0; i < samples; ++i, ++total) {
                    const double ti = 1e6 * unit_open(rng);
                    const double rho = 1.0 + 9.0 * unit_open(rng);
                    if (!check_phi_of_x_tilde(ti, rho).ordered()) ++violations;
                    if (i % 10 == 0) {
                        ++total;
                        if (!check_phi_of_x_tilde(std::pow(rho, rho), rho).ordered()) ++violations;
                    }
                }
            } else {
                throw ConfigError("unknown bound: " + which);
            }
            std::cout << "checked " << total << " violations " << violations << ' '
                      << (violations == 0 ? "PASS" : "FAIL") << '\n';
            return violations == 0 ? 0 : 1;
        } else if (*norm) {
            const auto f = read_csv(input);
            CellRange q{begin, end == 0 ? f.size() : end};
            if (!interval.empty()) {
                const auto& g = f.grid();
                const auto edge = [&](double x) {
                    const double pos = std::round((x - g.a()) / g.spacing());
                    return static_cast<std::size_t>(
                        std::clamp(pos, 0.0, static_cast<double>(g.size())));
                };
                q = {edge(interval[0]), edge(interval[1])};
            }
            if (q.empty() || q.end > f.size()) throw ConfigError("norm: empty or invalid interval");
            if (!family_setting.empty() && !psi_setting.empty())
                throw ConfigError("norm: give at most one of --phi and --psi");
            const std::string& setting = family_setting.empty() ? psi_setting : family_setting;
            if (!setting.empty()) {
                const auto eq = setting.find('=');
                if (eq == std::string::npos) throw ConfigError("expected name=value, got " + setting);
                param = std::stod(setting.substr(eq + 1));
                family = family_setting.empty() ? "psi" : "phi";
            }
            const auto spec = parse_family(family, param);
            print(primed ? luxemburg_norm_primed(f, q, spec) : luxemburg_norm(f, q, spec));
        } else if (*maximal) {
            const auto f = read_csv(input);
            const auto mode = parse_mode(mode_text, f.size());
            GridFunction g = f;
            if (op == "hl") g = hl_maximal(f, mode);
            else if (op == "power") g = power_maximal(f, exponent, mode);
            else if (op == "sharp") g = sharp_power(f, exponent, mode);
            else if (op == "sharp-power") g = sharp_power(f, exponent, mode);
            else if (op == "orlicz") g = orlicz_maximal(f, parse_family(family, param), mode);
            else throw ConfigError("unknown maximal operator: " + op);
            write_csv(g, out);
        } else if (*weights) {
            if (input.empty() == weight_kind.empty())
                throw ConfigError("weights: give exactly one of --input and --kind");
            const Weight w = input.empty()
                                 ? make_weight({parse_weight_kind(weight_kind), alpha, seed, bound},
                                               UniformGrid(a, b, levels))
                                 : Weight(read_csv(input));
            const auto mode = parse_mode(mode_text, w.size());
            const auto rh = reverse_holder_check(w, tau, mode);
            nlohmann::ordered_json j;
            j["n"] = w.size();
            j["mode"] = to_string(mode);
            j["a1"] = w.a1();
            j["ap"] = nlohmann::ordered_json::array();
            for (double pv : p_list) j["ap"].push_back({{"p", pv}, {"value", w.ap(pv)}});
            j["fujii"] = w.fujii(mode);
            j["r_w"] = rh.exponent;
            j["reverse_holder"] = {{"tau", tau},
                                   {"exponent", rh.exponent},
                                   {"worst_ratio", rh.worst_ratio},
                                   {"worst_begin", rh.worst_interval.begin},
                                   {"worst_end", rh.worst_interval.end}};
            if (report_path.empty()) {
                std::cout << j.dump(2) << '\n';
            } else {
                std::ofstream rep(report_path);
                if (!rep) throw IoError("cannot write " + report_path.string());
                rep << j.dump(2) << '\n';
            }
        } else if (*apply) {
            const auto f = read_csv(input);
            if (op == "hilbert") {
                write_csv(hilbert(f), out);
            } else if (op == "commutator") {
                const auto b_fn = make_symbol(SymbolSpec::parse(symbol, symbol_s, seed), f.grid());
                write_csv(commutator(b_fn, f), out);
            } else {
                throw ConfigError("unknown operator: " + op);
            }
        } else if (*decompose) {
            const auto f = read_csv(input);
            const auto cz = cz_decompose(f, lambda);
            nlohmann::ordered_json j;
            j["lambda"] = lambda;
            j["cubes"] = nlohmann::ordered_json::array();
            for (const auto& c : cz.cubes)
                j["cubes"].push_back({{"gen", c.interval.gen},
                                      {"idx", c.interval.idx},
                                      {"left", c.interval.left(f.grid())},
                                      {"right", c.interval.right(f.grid())},
                                      {"average", c.average},
                                      {"dilate_begin", c.dilate.cells.begin},
                                      {"dilate_end", c.dilate.cells.end},
                                      {"dilate_clamped", c.dilate.clamped}});
            j["omega_measure"] = cz.omega_measure(f.grid());
            std::ofstream cubes(prefix + "cubes.json");
            if (!cubes) throw IoError("cannot write " + prefix + "cubes.json");
            cubes << j.dump(2) << '\n';
            write_csv(cz.good, prefix + "good.csv");
            for (std::size_t i = 0; i < cz.bad.size(); ++i)
                write_csv(cz.bad[i], prefix + "bad_" + std::to_string(i) + ".csv");
        } else if (*verify_cmd) {
            ExperimentConfig cfg = config_path.empty() ? canonical_config(parse_theorem(theorem))
                                                       : load_config(config_path);
            if (!theorem.empty()) cfg.theorem = parse_theorem(theorem);
            const auto report = verify(cfg);
            report.write(out, csv_out.empty() ? csv_beside(out) : csv_out);
            std::cout << report.theorem << ": max implied constant "
                      << format_number(report.max_implied()) << ", "
                      << (report.passed() ? "all contracts hold" : "contract failure") << '\n';
            return report.passed() ? 0 : 1;
        } else if (*sweep_cmd) {
            ExperimentConfig cfg = load_config(config_path);
            if (!theorem.empty()) cfg.theorem = parse_theorem(theorem);
            const auto report = sweep(cfg, axis);
            report.write(json_out, out);
            std::cout << report.theorem << " over " << axis << ": max implied constant "
                      << format_number(report.max_implied()) << ", "
                      << (report.passed() ? "all contracts hold" : "contract failure") << '\n';
            return report.passed() ? 0 : 1;
        } else if (*calibrate) {
            const UniformGrid grid(a, b, levels);
            const auto mode = parse_mode(mode_text, grid.size());
            const double calibrated = calibrate_tau(grid, mode, safety);
            std::cout << "tau = " << std::setprecision(17) << calibrated << '\n';
            for (const auto& spec : weight_menu()) {
                const auto r = reverse_holder_check(make_weight(spec, grid), calibrated, mode);
                std::cout << "  " << spec.name() << ": fujii " << r.fujii << ", ratio "
                          << r.worst_ratio << '\n';
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
