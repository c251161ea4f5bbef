#include "czw/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "czw/error.hpp"
#include "czw/young.hpp"

namespace czw {

namespace {

void require_positive(const GridFunction& w) {
    for (double v : w.values())
        if (!(v > 0.0)) throw DomainError("weight values must be strictly positive");
}

// Uniform double in [0, 1) from the raw 64-bit stream, independent of the
// standard library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Weight::Weight(GridFunction w) : w_(std::move(w)), cache_(std::make_shared<Cache>()) {
    require_positive(w_);
}

double Weight::a1() const {
    std::lock_guard guard(cache_->lock);
    if (!cache_->a1) cache_->a1 = a1_constant(w_);
    return *cache_->a1;
}

double Weight::ap(double p) const {
    std::lock_guard guard(cache_->lock);
    auto it = cache_->ap.find(p);
    if (it == cache_->ap.end()) it = cache_->ap.emplace(p, ap_constant(w_, p)).first;
    return it->second;
}

double Weight::fujii(IntervalMode mode) const {
    std::lock_guard guard(cache_->lock);
    auto it = cache_->fujii.find(mode);
    if (it == cache_->fujii.end()) it = cache_->fujii.emplace(mode, fujii_constant(w_, mode)).first;
    return it->second;
}

double a1_constant(const GridFunction& w) {
    require_positive(w);
    const std::size_t n = w.size();
    double best = 1.0;
    for (std::size_t s = 0; s < n; ++s) {
        double sum = 0.0;
        double low = w[s];
        for (std::size_t e = s; e < n; ++e) {
            sum += w[e];
            low = std::min(low, w[e]);
            best = std::max(best, sum / static_cast<double>(e - s + 1) / low);
        }
    }
    return best;
}

double ap_constant(const GridFunction& w, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("ap_constant: p must be finite and > 1");
    require_positive(w);
    const std::size_t n = w.size();
    const double dual_exp = -1.0 / (p - 1.0);
    std::vector<double> dual(n);
    for (std::size_t i = 0; i < n; ++i) dual[i] = std::pow(w[i], dual_exp);
    double best = 1.0;
    for (std::size_t s = 0; s < n; ++s) {
        double sw = 0.0;
        double sd = 0.0;
        for (std::size_t e = s; e < n; ++e) {
            sw += w[e];
            sd += dual[e];
            const double len = static_cast<double>(e - s + 1);
            best = std::max(best, (sw / len) * std::pow(sd / len, p - 1.0));
        }
    }
    return best;
}

double fujii_constant(const GridFunction& w, IntervalMode mode) {
    require_positive(w);
    const std::size_t n = w.size();
    const PrefixSums prefix(w.values());
    double best = 1.0;

    if (mode == IntervalMode::Dyadic) {
        // For x in a dyadic Q, M^d(chi_Q w)(x) is the largest average over the
        // dyadic J with x in J, J inside Q; ancestors of Q only dilute.
        std::vector<double> local;
        for (int g = 0; g <= w.grid().levels(); ++g) {
            const std::size_t width = n >> g;
            for (std::size_t b = 0; b < n; b += width) {
                local.assign(width, 0.0);
                for (std::size_t sub = width; sub >= 1; sub /= 2) {
                    for (std::size_t c = b; c < b + width; c += sub) {
                        const double avg = prefix.mean(c, c + sub);
                        for (std::size_t x = c; x < c + sub; ++x)
                            local[x - b] = std::max(local[x - b], avg);
                    }
                }
                double integral_m = 0.0;
                for (double v : local) integral_m += v;
                best = std::max(best, integral_m / prefix.sum(b, b + width));
            }
        }
        return best;
    }

    // Fix the left end s and grow Q = [s, e). M_Q(x) only increases with e;
    // the new intervals are [a, e) for a <= x, whose best average for a cell
    // x is a running maximum over a.
    std::vector<double> local(n);
    for (std::size_t s = 0; s < n; ++s) {
        double integral_m = 0.0;
        for (std::size_t e = s + 1; e <= n; ++e) {
            double running = 0.0;
            local[e - 1] = 0.0;
            for (std::size_t x = s; x < e; ++x) {
                running = std::max(running, prefix.mean(x, e));
                if (running > local[x]) {
                    integral_m += running - local[x];
                    local[x] = running;
                }
            }
            best = std::max(best, integral_m / prefix.sum(s, e));
        }
    }
    return best;
}

ReverseHolderReport reverse_holder_check(const Weight& w, double tau, IntervalMode mode) {
    if (!(tau > 0.0)) throw DomainError("reverse_holder_check: tau must be > 0");
    ReverseHolderReport report;
    report.tau = tau;
    report.fujii = w.fujii(mode);
    report.exponent = 1.0 + 1.0 / (tau * report.fujii);

    const std::size_t n = w.size();
    std::vector<double> powered(n);
    for (std::size_t i = 0; i < n; ++i) powered[i] = std::pow(w[i], report.exponent);
    const PrefixSums pw(w.function().values());
    const PrefixSums pr(powered);
    const auto score = [&](std::size_t s, std::size_t e) {
        const double ratio =
            std::pow(pr.mean(s, e), 1.0 / report.exponent) / (2.0 * pw.mean(s, e));
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_interval = {s, e};
        }
    };
    if (mode == IntervalMode::Dyadic) {
        for (const auto& q : all_dyadic(w.grid())) {
            const auto c = q.cells(w.grid());
            score(c.begin, c.end);
        }
    } else {
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t e = s + 1; e <= n; ++e) score(s, e);
    }
    return report;
}

std::string WeightSpec::name() const {
    std::ostringstream out;
    switch (kind) {
        case WeightKind::Constant: out << "constant"; break;
        case WeightKind::Step: out << "step"; break;
        case WeightKind::Power: out << "power(" << alpha << ")"; break;
        case WeightKind::LogLike: out << "loglike"; break;
        case WeightKind::RandomAInf:
            out << "random-Ainf(seed=" << seed << ",bound=" << oscillation << ")";
            break;
    }
    return out.str();
}

Weight make_weight(const WeightSpec& spec, const UniformGrid& grid) {
    const double mid = 0.5 * (grid.a() + grid.b());
    switch (spec.kind) {
        case WeightKind::Constant:
            return Weight(GridFunction::constant(grid, 1.0));
        case WeightKind::Step:
            return Weight(GridFunction::sample(grid, [mid](double x) { return x < mid ? 1.0 : 2.0; }));
        case WeightKind::Power: {
            if (!(spec.alpha > -1.0 && spec.alpha < 1.0))
                throw DomainError("power weight: alpha must lie in (-1, 1)");
            const double floor = 0.5 * grid.spacing();
            return Weight(GridFunction::sample(grid, [&](double x) {
                return std::pow(std::max(std::abs(x), floor), spec.alpha);
            }));
        }
        case WeightKind::LogLike: {
            const double floor = 0.5 * grid.spacing();
            return Weight(GridFunction::sample(grid, [floor](double x) {
                return 1.0 + log_plus(1.0 / std::max(std::abs(x), floor));
            }));
        }
        case WeightKind::RandomAInf: {
            if (!(spec.oscillation > 0.0))
                throw DomainError("random-Ainf weight: oscillation bound must be > 0");
            std::mt19937_64 rng(spec.seed);
            constexpr int kTerms = 8;
            double amp[kTerms];
            double freq[kTerms];
            double phase[kTerms];
            for (int j = 0; j < kTerms; ++j) {
                amp[j] = 2.0 * unit_uniform(rng) - 1.0;
                freq[j] = 1.0 + std::floor(16.0 * unit_uniform(rng));
                phase[j] = 2.0 * std::numbers::pi * unit_uniform(rng);
            }
            auto phi = GridFunction::sample(grid, [&](double x) {
                const double u = (x - grid.a()) / grid.length();
                double acc = 0.0;
                for (int j = 0; j < kTerms; ++j)
                    acc += amp[j] * std::sin(2.0 * std::numbers::pi * freq[j] * u + phase[j]);
                return acc;
            });
            const double scale = spec.oscillation / std::max(phi.sup_norm(), 1e-300);
            return Weight(phi.map([scale](double v) { return std::exp(scale * v); }));
        }
    }
    throw DomainError("unknown weight kind");
}

std::vector<WeightSpec> weight_menu() {
    return {
        {WeightKind::Constant, 0.0, 0, 1.0},
        {WeightKind::Step, 0.0, 0, 1.0},
        {WeightKind::Power, -0.5, 0, 1.0},
        {WeightKind::Power, -0.25, 0, 1.0},
        {WeightKind::Power, 0.5, 0, 1.0},
        {WeightKind::LogLike, 0.0, 0, 1.0},
        {WeightKind::RandomAInf, 0.0, 1, 1.0},
        {WeightKind::RandomAInf, 0.0, 2, 2.0},
    };
}

double calibrate_tau(const UniformGrid& grid, IntervalMode mode, double safety) {
    if (!(safety >= 1.0)) throw ConfigError("calibrate_tau: safety must be >= 1");
    std::vector<Weight> menu;
    for (const auto& spec : weight_menu()) menu.push_back(make_weight(spec, grid));
    const auto passes = [&](double tau) {
        for (const auto& w : menu)
            if (reverse_holder_check(w, tau, mode).worst_ratio > 1.0) return false;
        return true;
    };
    double lo = 1e-6;
    double hi = 1.0;
    while (!passes(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw EstimationError("calibrate_tau: no tau makes the menu pass");
    }
    if (passes(lo)) return lo * safety;
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = std::sqrt(lo * hi);
        if (passes(mid)) hi = mid; else lo = mid;
    }
    return hi * safety;
}

}  // namespace czw
