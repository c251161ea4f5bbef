#include "czw/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "czw/error.hpp"
#include "czw/maximal.hpp"
#include "czw/orlicz.hpp"
#include "czw/singular.hpp"
#include "czw/weights.hpp"

namespace czw {

namespace {

using nlohmann::ordered_json;

struct Setup {
    UniformGrid grid;
    IntervalMode mode;
    GridFunction f;
    std::optional<SymbolSet> symbols;
    Weight w;

    std::size_t k() const { return symbols ? symbols->size() : 0; }
    // 1/s with the convention 1/s = 0 when there are no symbols.
    double inv_s() const { return symbols ? 1.0 / symbols->s_total() : 0.0; }
    double norm_b() const { return symbols ? symbols->norm() : 1.0; }

    // T_b f for the full set; H f without symbols.
    GridFunction operator_output() const {
        return symbols ? multilinear_commutator(*symbols, symbols->full_mask(), f) : hilbert(f);
    }
};

Setup make_setup(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto grid = cfg.grid.make();
    std::optional<SymbolSet> symbols;
    if (!cfg.symbols.empty()) {
        std::vector<GridFunction> bs;
        std::vector<double> ss;
        for (const auto& s : cfg.symbols) {
            bs.push_back(make_symbol(s.spec(), grid));
            ss.push_back(s.s);
        }
        symbols.emplace(std::move(bs), std::move(ss), cfg.stride);
    }
    return Setup{grid, parse_mode(cfg.mode, grid.size()), cfg.input.make(grid), std::move(symbols),
                 make_weight(cfg.weight, grid)};
}

VerificationReport start_report(const ExperimentConfig& cfg, const Setup& s) {
    VerificationReport r;
    r.theorem = to_string(cfg.theorem);
    r.config = to_json(cfg);
    r.metadata["n"] = s.grid.size();
    r.metadata["mode"] = to_string(s.mode);
    r.metadata["k"] = s.k();
    r.metadata["weight"] = cfg.weight.name();
    if (s.symbols) {
        ordered_json syms = ordered_json::array();
        for (std::size_t i = 0; i < s.symbols->size(); ++i)
            syms.push_back({{"name", cfg.symbols[i].spec().name()},
                            {"s", s.symbols->s(i)},
                            {"seminorm", s.symbols->seminorm(i)}});
        r.metadata["symbols"] = syms;
        r.metadata["s"] = s.symbols->s_total();
        r.metadata["norm_b"] = s.norm_b();
    }
    return r;
}

// Every row finite and nonnegative, and rhs = 0 only alongside lhs = 0.
void add_standard_contracts(VerificationReport& r) {
    bool finite = true;
    bool homogeneous = true;
    for (const auto& row : r.rows) {
        if (!row.counted()) continue;
        if (!(std::isfinite(row.lhs) && std::isfinite(row.rhs) && std::isfinite(row.implied)) ||
            row.lhs < 0.0 || row.rhs < 0.0)
            finite = false;
        if (row.rhs == 0.0 && row.lhs != 0.0) homogeneous = false;
    }
    r.add_contract("finite_nonnegative", finite);
    r.add_contract("zero_rhs_implies_zero_lhs", homogeneous);
    r.set_aggregate("max_implied", r.max_implied());
    r.set_aggregate("min_positive_implied", r.min_positive_implied());
}

void require_rows(const VerificationReport& r) {
    if (r.rows.empty()) throw ConfigError(r.theorem + ": empty sweep");
}

// sum |f|^p weight h, raised to 1/p, where `weight` may be any nonnegative grid function.
double lp_with(const GridFunction& f, const GridFunction& weight, double p) {
    return weighted_lp_norm(f, weight, p);
}

class OrliczCache {
public:
    OrliczCache(const GridFunction& g, IntervalMode mode) : g_(g), mode_(mode) {}
    const GridFunction& get(double rho) {
        auto it = cache_.find(rho);
        if (it == cache_.end())
            it = cache_.emplace(rho, orlicz_maximal(g_, YoungSpec::phi(rho), mode_)).first;
        return it->second;
    }

private:
    const GridFunction& g_;
    IntervalMode mode_;
    std::map<double, GridFunction> cache_;
};

double dual(double p) { return p / (p - 1.0); }

}  // namespace

void require_margin(const GridFunction& f) {
    const auto& g = f.grid();
    const double margin = 0.25 * g.length();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0.0) continue;
        const double x = g.midpoint(i);
        if (x - g.a() < margin || g.b() - x < margin) {
            std::ostringstream msg;
            msg << "input must vanish within " << margin << " of the domain ends (nonzero at x = "
                << x << ")";
            throw PreconditionError(msg.str());
        }
    }
}

VerificationReport verify_strong(const ExperimentConfig& cfg) {
    const auto s = make_setup(cfg);
    require_margin(s.f);
    auto r = start_report(cfg, s);
    const auto tb = s.operator_output();
    OrliczCache mw(s.w.function(), s.mode);
    const double k = static_cast<double>(s.k());
    for (double p : cfg.p) {
        const double lhs = lp_with(tb, s.w.function(), p);
        for (double delta : cfg.delta) {
            const double rho = (1.0 + s.inv_s()) * p - 1.0 + delta;
            const double pp = dual(p);
            const double factor = std::pow(pp, k + 1.0) * std::pow(p, 1.0 + s.inv_s()) *
                                  std::pow((p - 1.0) / delta, 1.0 / pp);
            const double rhs = factor * s.norm_b() * lp_with(s.f, mw.get(rho), p);
            r.add_row({{}, {{"p", p}, {"delta", delta}}, lhs, rhs, implied_constant(lhs, rhs), {}});
        }
    }
    require_rows(r);
    add_standard_contracts(r);
    const double lo = r.min_positive_implied();
    r.set_aggregate("spread", lo > 0.0 ? r.max_implied() / lo : 0.0);
    return r;
}

VerificationReport verify_endpoint(const ExperimentConfig& cfg) {
    const auto s = make_setup(cfg);
    require_margin(s.f);
    auto r = start_report(cfg, s);
    const auto tb = s.operator_output();
    OrliczCache mw(s.w.function(), s.mode);
    const double k = static_cast<double>(s.k());
    const auto phi = YoungSpec::phi(s.inv_s());
    const double h = s.grid.spacing();
    bool slopes_ok = true;
    double max_slope = -HUGE_VAL;
    for (double lambda : cfg.lambda) {
        const double lhs = level_set_measure(tb, s.w.function(), lambda);
        std::vector<double> xs;
        std::vector<double> ys;
        for (double eps : cfg.epsilon) {
            const auto& m = mw.get(s.inv_s() + eps);
            double integral_term = 0.0;
            for (std::size_t i = 0; i < s.f.size(); ++i)
                integral_term += evaluate(phi, s.norm_b() * std::abs(s.f[i]) / lambda) * m[i];
            integral_term *= h;
            const double rhs = integral_term / std::pow(eps, k + 1.0);
            r.add_row({{}, {{"lambda", lambda}, {"epsilon", eps}}, lhs, rhs,
                       implied_constant(lhs, rhs), {}});
            if (lhs > 0.0 && integral_term > 0.0) {
                xs.push_back(std::log(1.0 / eps));
                ys.push_back(std::log(lhs / integral_term));
            }
        }
        const double slope = fit_slope(xs, ys);
        std::ostringstream key;
        key << "slope@lambda=" << format_number(lambda);
        r.set_aggregate(key.str(), slope);
        if (std::isfinite(slope)) {
            max_slope = std::max(max_slope, slope);
            if (slope > k + 1.0 + cfg.slope_tolerance) slopes_ok = false;
        }
        std::ostringstream note;
        note << "fit log(lhs / integral) ~ slope * log(1/epsilon) at lambda = "
             << format_number(lambda) << ": slope = " << format_number(slope) << " over "
             << xs.size() << " points";
        r.notes.push_back(note.str());
    }
    require_rows(r);
    add_standard_contracts(r);
    if (std::isfinite(max_slope)) r.set_aggregate("max_slope", max_slope);
    std::ostringstream detail;
    detail << "slope <= " << format_number(k + 1.0 + cfg.slope_tolerance);
    r.add_contract("epsilon_blowup_slope", slopes_ok, detail.str());
    return r;
}

VerificationReport verify_corollary(const ExperimentConfig& cfg) {
    const auto s = make_setup(cfg);
    if (s.k() != 1 || s.symbols->s(0) != 1.0)
        throw ConfigError("corollary: exactly one symbol with s = 1 is required");
    require_margin(s.f);
    auto r = start_report(cfg, s);
    const auto& b = s.symbols->symbol(0);
    const auto tb = commutator(b, s.f);
    const double bmo = bmo_seminorm(b, cfg.stride);
    const auto mw = hl_maximal(s.w.function(), s.mode);
    const double a_inf = s.w.fujii(s.mode);
    const double a1 = s.w.a1();
    const double phi1_a1 = evaluate(YoungSpec::phi(1.0), a1);
    const double factor1 = a_inf * std::pow(1.0 + log_plus(a_inf), 2.0);
    const double factor2 = phi1_a1 * phi1_a1;
    r.metadata["bmo_seminorm"] = bmo;
    r.metadata["fujii_constant"] = a_inf;
    r.metadata["a1_constant"] = a1;

    // The A_1 constant of a weight that is not saturated at this resolution
    // still moves when the grid is refined; such weights are flagged.
    std::vector<std::string> flags;
    if (cfg.grid.levels > 1) {
        const UniformGrid coarse(cfg.grid.a, cfg.grid.b, cfg.grid.levels - 1);
        const double a1_coarse = make_weight(cfg.weight, coarse).a1();
        r.metadata["a1_constant_half_resolution"] = a1_coarse;
        if (std::abs(a1 / a1_coarse - 1.0) > 0.01) flags.push_back("near_degenerate");
    }

    const auto phi = YoungSpec::phi(1.0);
    const double h = s.grid.spacing();
    for (double lambda : cfg.lambda) {
        const double lhs = level_set_measure(tb, s.w.function(), lambda);
        double integral_term = 0.0;
        for (std::size_t i = 0; i < s.f.size(); ++i)
            integral_term += evaluate(phi, bmo * std::abs(s.f[i]) / lambda) * mw[i];
        integral_term *= h;
        const double rhs1 = factor1 * integral_term;
        const double rhs2 = factor2 * integral_term;
        r.add_row({"fujii", {{"lambda", lambda}}, lhs, rhs1, implied_constant(lhs, rhs1), flags});
        r.add_row({"a1", {{"lambda", lambda}}, lhs, rhs2, implied_constant(lhs, rhs2), flags});
    }
    require_rows(r);
    add_standard_contracts(r);
    return r;
}

VerificationReport verify_two_weight(const ExperimentConfig& cfg) {
    const auto s = make_setup(cfg);
    auto r = start_report(cfg, s);
    std::set<double> s_values;
    for (const auto& sc : cfg.symbols) s_values.insert(sc.s);
    if (s_values.empty()) s_values.insert(1.0);
    OrliczCache mw(s.w.function(), s.mode);
    const auto af = s.f.abs();
    OrliczCache mf(af, s.mode);
    for (double sv : s_values) {
        const auto& lhs_max = mf.get(1.0 / sv);
        for (double p : cfg.p) {
            const double pp = dual(p);
            GridFunction f_over_w = af;
            for (std::size_t i = 0; i < af.size(); ++i) f_over_w[i] /= s.w[i];
            const double norm_f = lp_with(f_over_w, s.w.function(), pp);
            for (double delta : cfg.delta) {
                const auto& v = mw.get((1.0 + 1.0 / sv) * p - 1.0 + delta);
                GridFunction ratio = lhs_max;
                for (std::size_t i = 0; i < ratio.size(); ++i) ratio[i] /= v[i];
                const double lhs = lp_with(ratio, v, pp);
                const double rhs = std::pow(p, 1.0 + 1.0 / sv) *
                                   std::pow((p - 1.0) / delta, 1.0 / pp) * norm_f;
                r.add_row({{}, {{"s", sv}, {"p", p}, {"delta", delta}}, lhs, rhs,
                           implied_constant(lhs, rhs), {}});
            }
        }
    }
    require_rows(r);
    add_standard_contracts(r);
    return r;
}

namespace {

struct PointwiseRatio {
    double ratio = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

PointwiseRatio pointwise_sup(const GridFunction& lhs, const GridFunction& rhs) {
    PointwiseRatio out;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        const double q = implied_constant(lhs[i], rhs[i]);
        if (q > out.ratio) out = {q, lhs[i], rhs[i]};
    }
    return out;
}

}  // namespace

VerificationReport verify_sharp_pointwise(const ExperimentConfig& cfg) {
    const auto s = make_setup(cfg);
    require_margin(s.f);
    for (double d : cfg.delta)
        for (double e : cfg.epsilon)
            if (!(d < e)) throw ConfigError("sharp: every delta must be smaller than every epsilon");
    auto r = start_report(cfg, s);
    const auto tb = s.operator_output();

    // Terms that do not depend on delta or eps are computed once.
    std::optional<GridFunction> base;
    std::vector<std::pair<double, GridFunction>> sub_outputs;  // (||sigma||, T_{sigma'} f)
    if (s.symbols) {
        base = orlicz_maximal(s.f, YoungSpec::phi(s.inv_s()), s.mode) * s.norm_b();
        const auto full = s.symbols->full_mask();
        for (std::uint32_t sigma = 1; sigma <= full; ++sigma)
            sub_outputs.emplace_back(s.symbols->norm(sigma),
                                     multilinear_commutator(*s.symbols, full & ~sigma, s.f));
    } else {
        base = hl_maximal(s.f, s.mode);
    }

    for (double delta : cfg.delta) {
        const auto lhs = sharp_power(tb, delta, s.mode);
        for (double eps : cfg.epsilon) {
            GridFunction rhs = *base;
            for (const auto& [norm_sigma, t_sub] : sub_outputs)
                if (norm_sigma != 0.0) rhs += power_maximal(t_sub, eps, s.mode) * norm_sigma;
            const auto sup = pointwise_sup(lhs, rhs);
            r.add_row({{}, {{"delta", delta}, {"epsilon", eps}}, sup.lhs, sup.rhs, sup.ratio, {}});
        }
    }
    require_rows(r);
    add_standard_contracts(r);
    return r;
}

VerificationReport verify_maximal_lemmas(const ExperimentConfig& cfg) {
    const auto s = make_setup(cfg);
    auto r = start_report(cfg, s);
    const auto& w = s.w.function();
    const double a_inf_d = s.w.fujii(IntervalMode::Dyadic);
    r.metadata["fujii_constant_dyadic"] = a_inf_d;

    for (double delta : cfg.delta) {
        const auto sharp = sharp_power(s.f, delta, IntervalMode::Dyadic);
        const bool degenerate = sharp.sup_norm() == 0.0;
        for (double p : cfg.p) {
            const double lhs = weighted_lp_norm(s.f, w, p);
            const double rhs = p * a_inf_d * weighted_lp_norm(sharp, w, p);
            ReportRow row{"sharp_lp", {{"p", p}, {"delta", delta}}, lhs, rhs,
                          implied_constant(lhs, rhs), {}};
            if (degenerate) {
                row.flags.push_back("degenerate");
                row.implied = 0.0;
            }
            r.add_row(row);
        }
    }

    for (double eps : cfg.epsilon) {
        const auto sharp = sharp_power(s.f, eps, IntervalMode::Dyadic);
        const auto maximal = power_maximal(s.f, eps, IntervalMode::Dyadic);
        const bool degenerate = sharp.sup_norm() == 0.0;
        for (double p : cfg.p) {
            const double lhs = weighted_lp_norm(maximal, w, p);
            const double rhs = p * a_inf_d * weighted_lp_norm(sharp, w, p);
            ReportRow row{"maximal_sharp_lp", {{"p", p}, {"epsilon", eps}}, lhs, rhs,
                          implied_constant(lhs, rhs), {}};
            if (degenerate) {
                row.flags.push_back("degenerate");
                row.implied = 0.0;
            }
            r.add_row(row);
        }
    }

    bool margin_ok = true;
    try {
        require_margin(s.f);
    } catch (const PreconditionError&) {
        margin_ok = false;
    }
    const auto mf = hl_maximal(s.f, s.mode);
    const auto hf = hilbert(s.f);
    for (double delta : cfg.delta) {
        const auto sup = pointwise_sup(sharp_power(hf, delta, s.mode), mf);
        ReportRow row{"sharp_hilbert", {{"delta", delta}}, sup.lhs, sup.rhs, sup.ratio, {}};
        if (!margin_ok) row.flags.push_back("excluded");
        r.add_row(row);
    }

    {
        const double lhs = weak_l1_norm(mf, w);
        const auto mw = hl_maximal(w, s.mode);
        double rhs = 0.0;
        for (std::size_t i = 0; i < s.f.size(); ++i) rhs += std::abs(s.f[i]) * mw[i];
        rhs *= s.grid.spacing();
        r.add_row({"fefferman_stein", {}, lhs, rhs, implied_constant(lhs, rhs), {}});
    }

    require_rows(r);
    add_standard_contracts(r);
    for (const char* label : {"sharp_lp", "maximal_sharp_lp", "sharp_hilbert", "fefferman_stein"}) {
        double m = 0.0;
        for (const auto& row : r.rows)
            if (row.label == label && row.counted()) m = std::max(m, row.implied);
        r.set_aggregate(std::string("max_implied@") + label, m);
    }
    return r;
}

VerificationReport verify(const ExperimentConfig& cfg) {
    switch (cfg.theorem) {
        case Theorem::Strong: return verify_strong(cfg);
        case Theorem::Endpoint: return verify_endpoint(cfg);
        case Theorem::Corollary: return verify_corollary(cfg);
        case Theorem::TwoWeight: return verify_two_weight(cfg);
        case Theorem::Sharp: return verify_sharp_pointwise(cfg);
        case Theorem::MaximalLemmas: return verify_maximal_lemmas(cfg);
    }
    throw ConfigError("unknown theorem");
}

VerificationReport sweep(const ExperimentConfig& cfg, const std::string& axis) {
    std::vector<double> values;
    if (axis == "epsilon") values = cfg.epsilon;
    else if (axis == "delta") values = cfg.delta;
    else if (axis == "p") values = cfg.p;
    else if (axis == "resolution") values.assign(cfg.resolution.begin(), cfg.resolution.end());
    else throw ConfigError("unknown sweep axis: " + axis);
    if (values.empty()) throw ConfigError("sweep: axis " + axis + " has no values");

    VerificationReport out;
    out.theorem = "sweep:" + to_string(cfg.theorem);
    out.config = to_json(cfg);
    out.metadata["axis"] = axis;
    std::vector<double> xs;
    std::vector<double> maxima;
    bool all_passed = true;
    for (double v : values) {
        ExperimentConfig point = cfg;
        if (axis == "epsilon") point.epsilon = {v};
        else if (axis == "delta") point.delta = {v};
        else if (axis == "p") point.p = {v};
        else point.grid.levels = static_cast<int>(v);
        auto rep = verify(point);
        for (auto row : rep.rows) {
            if (axis == "resolution") row.coords.insert(row.coords.begin(), {"levels", v});
            out.add_row(std::move(row));
        }
        for (const auto& c : rep.contracts) {
            all_passed = all_passed && c.passed;
            if (!c.passed) {
                std::ostringstream name;
                name << c.name << "@" << axis << "=" << format_number(v);
                out.add_contract(name.str(), false, c.detail);
            }
        }
        std::ostringstream key;
        key << "max_implied@" << axis << "=" << format_number(v);
        out.set_aggregate(key.str(), rep.max_implied());
        xs.push_back(v);
        maxima.push_back(rep.max_implied());
    }
    out.add_contract("all_points", all_passed);
    out.set_aggregate("max_implied", out.max_implied());

    if (axis == "resolution") {
        double drift = 0.0;
        for (std::size_t i = 1; i < maxima.size(); ++i)
            if (maxima[i - 1] > 0.0) drift = std::max(drift, std::abs(maxima[i] / maxima[i - 1] - 1.0));
        out.set_aggregate("resolution_drift", drift);
        out.notes.push_back("resolution_drift = largest relative change of max_implied between "
                            "consecutive resolutions");
    } else {
        std::vector<double> lx;
        std::vector<double> ly;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (maxima[i] > 0.0 && std::isfinite(maxima[i])) {
                lx.push_back(std::log(1.0 / xs[i]));
                ly.push_back(std::log(maxima[i]));
            }
        const double slope = fit_slope(lx, ly);
        out.set_aggregate("slope", slope);
        std::ostringstream note;
        note << "fit log(max_implied) ~ slope * log(1/" << axis << "): slope = "
             << format_number(slope);
        out.notes.push_back(note.str());
        if (axis == "epsilon" && cfg.theorem == Theorem::Endpoint) {
            // implied = numerator * eps^{k+1}, so the numerator slope adds k + 1.
            const double k = static_cast<double>(cfg.symbols.size());
            const double numerator_slope = slope + k + 1.0;
            out.set_aggregate("numerator_slope", numerator_slope);
            out.add_contract("epsilon_blowup_slope",
                             !std::isfinite(numerator_slope) ||
                                 numerator_slope <= k + 1.0 + cfg.slope_tolerance);
        }
    }
    return out;
}

}  // namespace czw
