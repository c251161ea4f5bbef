#include "czw/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "czw/error.hpp"
#include "czw/orlicz.hpp"

namespace czw {

namespace {

// out[x] = max over intervals [s, e) containing x of score(s, e), for every
// grid-aligned interval or every dyadic one.
template <class Score>
std::vector<double> interval_sup(const UniformGrid& grid, IntervalMode mode, Score&& score) {
    const std::size_t n = grid.size();
    std::vector<double> out(n, 0.0);
    if (mode == IntervalMode::Dyadic) {
        for (int g = 0; g <= grid.levels(); ++g) {
            const std::size_t width = n >> g;
            for (std::size_t b = 0; b < n; b += width) {
                const double v = score(b, b + width);
                for (std::size_t c = b; c < b + width; ++c) out[c] = std::max(out[c], v);
            }
        }
        return out;
    }
    std::vector<double> by_end(n + 1);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t e = s + 1; e <= n; ++e) by_end[e] = score(s, e);
        double running = 0.0;
        for (std::size_t e = n; e > s; --e) {
            running = std::max(running, by_end[e]);
            out[e - 1] = std::max(out[e - 1], running);
        }
    }
    return out;
}

GridFunction root_of(GridFunction f, double exponent) {
    for (double& v : f.values()) v = std::pow(v, 1.0 / exponent);
    return f;
}

}  // namespace

GridFunction hl_maximal(const GridFunction& f, IntervalMode mode) {
    const auto a = f.abs();
    const PrefixSums prefix(a.values());
    return GridFunction(f.grid(), interval_sup(f.grid(), mode, [&](std::size_t s, std::size_t e) {
                            return prefix.mean(s, e);
                        }));
}

GridFunction power_maximal(const GridFunction& f, double eps, IntervalMode mode) {
    if (!(eps > 0.0)) throw DomainError("power_maximal: eps must be > 0");
    if (eps == 1.0) return hl_maximal(f, mode);
    return root_of(hl_maximal(f.pow(eps), mode), eps);
}

GridFunction sharp_maximal(const GridFunction& f, IntervalMode mode) {
    const auto v = f.values();
    return GridFunction(f.grid(), interval_sup(f.grid(), mode, [&](std::size_t s, std::size_t e) {
                            double mean = 0.0;
                            for (std::size_t i = s; i < e; ++i) mean += v[i];
                            mean /= static_cast<double>(e - s);
                            double acc = 0.0;
                            for (std::size_t i = s; i < e; ++i) acc += std::abs(v[i] - mean);
                            return acc / static_cast<double>(e - s);
                        }));
}

GridFunction sharp_power(const GridFunction& f, double delta, IntervalMode mode) {
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("sharp_power: delta must be in (0, 1]");
    if (delta == 1.0) return sharp_maximal(f, mode);
    return root_of(sharp_maximal(f.pow(delta), mode), delta);
}

GridFunction lr_maximal(const GridFunction& f, double r, IntervalMode mode) {
    if (!(r >= 1.0)) throw DomainError("lr_maximal: r must be >= 1");
    return power_maximal(f, r, mode);
}

RatioReport check_loglog_vs_lr(const GridFunction& w, double eps, double alpha,
                               IntervalMode mode) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("check_loglog_vs_lr: eps must be in (0, 1)");
    if (!(alpha > 0.0)) throw DomainError("check_loglog_vs_lr: alpha must be > 0");
    const auto lhs = orlicz_maximal(w, YoungSpec::phi(1.0 + eps), mode);
    const auto lr = lr_maximal(w, 1.0 + alpha * (1.0 + eps), mode);
    const double factor = std::pow(alpha, -(1.0 + eps));
    RatioReport report;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double rhs = factor * lr[i];
        const double ratio = rhs > 0.0 ? lhs[i] / rhs : (lhs[i] > 0.0 ? HUGE_VAL : 0.0);
        if (ratio > report.worst_ratio || i == 0) {
            report.worst_ratio = ratio;
            report.worst_cell = i;
            report.lhs_at_worst = lhs[i];
            report.rhs_at_worst = rhs;
        }
    }
    return report;
}

}  // namespace czw
