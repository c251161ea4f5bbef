#include "czw/czrf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "czw/error.hpp"
#include "czw/maximal.hpp"

namespace czw {

double CZDecomposition::omega_measure(const UniformGrid& grid) const {
    return static_cast<double>(std::count(omega.begin(), omega.end(), true)) * grid.spacing();
}

GridFunction CZDecomposition::weight_off_dilates(const GridFunction& w) const {
    GridFunction out = w;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (dilated[i]) out[i] = 0.0;
    return out;
}

CZDecomposition cz_decompose(const GridFunction& f, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("cz_decompose: lambda must be > 0");
    const auto& grid = f.grid();
    const std::size_t n = f.size();
    const auto a = f.abs();
    const PrefixSums prefix(a.values());
    const double root = prefix.mean(0, n);
    if (root > lambda) {
        std::ostringstream msg;
        msg << "cz_decompose: root average " << root << " exceeds lambda " << lambda;
        throw PreconditionError(msg.str());
    }

    CZDecomposition out{lambda, {}, f, {}, std::vector<bool>(n, false), std::vector<bool>(n, false)};
    std::vector<DyadicInterval> stack{{0, 0}};
    while (!stack.empty()) {
        const auto q = stack.back();
        stack.pop_back();
        const auto cells = q.cells(grid);
        const double avg = prefix.mean(cells.begin, cells.end);
        if (avg > lambda) {
            out.cubes.push_back({q, cells, avg, dilate(grid, cells, 5.0)});
            continue;
        }
        if (cells.size() == 1) continue;
        const auto [left, right] = q.children();
        stack.push_back(right);
        stack.push_back(left);
    }

    for (const auto& cube : out.cubes) {
        const double mean = average(f, cube.cells);
        GridFunction h(grid);
        for (std::size_t i = cube.cells.begin; i < cube.cells.end; ++i) {
            h[i] = f[i] - mean;
            out.good[i] = mean;
            out.omega[i] = true;
        }
        out.bad.push_back(std::move(h));
        for (std::size_t i = cube.dilate.cells.begin; i < cube.dilate.cells.end; ++i)
            out.dilated[i] = true;
    }
    return out;
}

GridFunction rdf_S(const GridFunction& h, const Weight& v, double p, IntervalMode mode) {
    if (!(p > 1.0)) throw DomainError("rdf_S: p must be > 1");
    require_same_grid(h, v.function(), "rdf_S");
    for (double x : h.values())
        if (x < 0.0) throw DomainError("rdf_S: h must be nonnegative");
    const auto root = v.function().map([p](double x) { return std::pow(x, 1.0 / p); });
    auto m = hl_maximal(h * root, mode);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] /= root[i];
    return m;
}

namespace {

double vnorm(const GridFunction& f, const Weight& v, double p) {
    return weighted_lp_norm(f, v.function(), p);
}

bool is_zero(const GridFunction& f) {
    return std::all_of(f.values().begin(), f.values().end(), [](double x) { return x == 0.0; });
}

void validate(const GridFunction& h, const Weight& v, double p, int K) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("rdf_build: p must be finite and > 1");
    if (K < 1) throw DomainError("rdf_build: K must be >= 1");
    require_same_grid(h, v.function(), "rdf_build");
    for (double x : h.values())
        if (x < 0.0) throw DomainError("rdf_build: h must be nonnegative");
}

}  // namespace

double estimate_S_norm(const GridFunction& h, const Weight& v, double p, IntervalMode mode) {
    if (is_zero(h)) return 0.0;
    GridFunction u = h * (1.0 / vnorm(h, v, p));
    double best = 0.0;
    double previous = 0.0;
    double change = 0.0;
    for (int it = 0; it < kPowerIterations; ++it) {
        auto su = rdf_S(u, v, p, mode);
        const double ratio = vnorm(su, v, p);  // ||u|| = 1
        best = std::max(best, ratio);
        if (it > 0) change = std::abs(ratio - previous) / ratio;
        previous = ratio;
        u = su * (1.0 / ratio);
    }
    if (change > 1e-2) {
        std::ostringstream msg;
        msg << "estimate_S_norm: power iteration did not settle (last relative change " << change
            << ")";
        throw EstimationError(msg.str());
    }
    return best;
}

RdFResult rdf_build_with_norm(const GridFunction& h, const Weight& v, double p, int K, double B,
                              IntervalMode mode) {
    validate(h, v, p, K);
    if (!(B > 0.0) || !std::isfinite(B)) throw DomainError("rdf_build: B must be > 0");
    RdFResult out{v, p, B, B, K, 0.0, 0.0, GridFunction(h.grid()), {}};
    if (is_zero(h)) {
        out.diagnostics.a1_of_product = 1.0;
        return out;
    }

    const double step = 1.0 / (2.0 * B);
    GridFunction term = h;
    GridFunction sum(h.grid());
    for (int k = 0; k < K; ++k) {
        sum += term;
        term = rdf_S(term, v, p, mode) * step;
    }
    const auto next = rdf_S(term, v, p, mode) * step;
    double q = 0.0;
    for (std::size_t i = 0; i < term.size(); ++i) {
        if (term[i] > 0.0) q = std::max(q, next[i] / term[i]);
        else if (next[i] > 0.0) q = HUGE_VAL;
    }
    if (!(q < 1.0)) {
        std::ostringstream msg;
        msg << "rdf_build: series does not contract pointwise (rate " << q << "); raise B";
        throw EstimationError(msg.str());
    }
    out.tail_factor = (1.0 + 1e-9) / (1.0 - q);
    const auto tail = term * out.tail_factor;
    out.Rh = sum + tail;

    auto& d = out.diagnostics;
    d.domination_margin = HUGE_VAL;
    for (std::size_t i = 0; i < h.size(); ++i)
        d.domination_margin = std::min(d.domination_margin, out.Rh[i] - h[i]);
    const double rh_norm = vnorm(out.Rh, v, p);
    d.norm_ratio = rh_norm / vnorm(h, v, p);
    out.tail_fraction = vnorm(tail, v, p) / rh_norm;
    const auto s_rh = rdf_S(out.Rh, v, p, mode);
    for (std::size_t i = 0; i < h.size(); ++i)
        d.a1_ratio = std::max(d.a1_ratio, s_rh[i] / (2.0 * B * out.Rh[i]));
    const auto root = v.function().map([p](double x) { return std::pow(x, 1.0 / p); });
    d.a1_of_product = a1_constant(out.Rh * root);
    return out;
}

RdFResult rdf_build(const GridFunction& h, const Weight& v, double p, int K, double safety,
                    IntervalMode mode) {
    validate(h, v, p, K);
    if (!(safety >= 1.0)) throw DomainError("rdf_build: safety must be >= 1");
    const double estimate = estimate_S_norm(h, v, p, mode);
    if (estimate == 0.0) {
        auto out = rdf_build_with_norm(h, v, p, K, safety, mode);
        out.norm_estimate = 0.0;
        return out;
    }
    auto out = rdf_build_with_norm(h, v, p, K, safety * estimate, mode);
    out.norm_estimate = estimate;
    return out;
}

}  // namespace czw
