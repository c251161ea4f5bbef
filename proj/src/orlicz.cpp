#include "czw/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "czw/error.hpp"

namespace czw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sums {
    double phi = 0.0;    // sum Phi(t_i)
    double deriv = 0.0;  // sum t_i Phi'(t_i)
};

// Evaluates avg Phi(v / lambda) over a window for lambda = exp(u). Log samples
// are only consulted by the PhiRho fast path.
class LuxemburgKernel {
public:
    explicit LuxemburgKernel(const YoungSpec& spec) : spec_(spec) {
        spec_.validate();
        convex_ = spec_.is_convex();
        unit_root_ = invert_unit(spec_);
    }

    const YoungSpec& spec() const { return spec_; }

    // Solve on values[begin, end). `logs` may be empty unless the family is PhiRho.
    double solve(std::span<const double> values, std::span<const double> logs, double tol,
                 std::optional<double> guess_log = std::nullopt,
                 double* solved_log = nullptr) const {
        const std::size_t count = values.size();
        if (count == 0) return 0.0;
        double sum = 0.0;
        double top = 0.0;
        for (double v : values) {
            sum += v;
            top = std::max(top, v);
        }
        if (top == 0.0) return 0.0;
        const double mean = sum / static_cast<double>(count);

        if (spec_.family == YoungFamily::Identity) return mean;
        if (spec_.family == YoungFamily::Power && spec_.param >= 1.0) {
            double acc = 0.0;
            for (double v : values) acc += std::pow(v, spec_.param);
            return std::pow(acc / static_cast<double>(count), 1.0 / spec_.param);
        }

        const double target = std::log1p(-0.5 * tol);
        const double floor = std::log1p(-tol);
        const double log_count = std::log(static_cast<double>(count));

        const auto excess = [&](double u, Sums& s) {
            s = sums(values, logs, u);
            if (!std::isfinite(s.phi)) return kInf;
            if (s.phi <= 0.0) return -kInf;
            return std::log(s.phi) - log_count;
        };

        double lo;
        double hi;
        Sums s;
        if (convex_) {
            lo = std::log(mean / unit_root_);
            hi = std::log(top / unit_root_);
        } else {
            lo = std::log(mean);
            hi = lo;
            while (excess(lo, s) < 0.0) lo -= 1.0;
            while (excess(hi, s) > 0.0) hi += 1.0;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) {
            if (solved_log) *solved_log = hi;
            return std::exp(hi);
        }

        double u = guess_log && *guess_log > lo && *guess_log < hi ? *guess_log : 0.5 * (lo + hi);
        for (int iter = 0; iter < 300; ++iter) {
            const double g = excess(u, s);
            if (g <= 0.0 && g >= floor) {
                if (solved_log) *solved_log = u;
                return std::exp(u);
            }
            if (g > 0.0) lo = u; else hi = u;
            double next = 0.5 * (lo + hi);
            if (std::isfinite(g) && s.deriv > 0.0) {
                const double newton = u + (g - target) * s.phi / s.deriv;
                if (newton > lo && newton < hi) next = newton;
            }
            if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) {
                if (solved_log) *solved_log = hi;
                return std::exp(hi);
            }
            u = next;
        }
        throw EstimationError("luxemburg_norm: root finding did not converge for " +
                              spec_.describe());
    }

    // Cheap upper bound for the norm of a window with the given mean and max.
    double upper_bound(double mean, double top) const {
        if (top == 0.0) return 0.0;
        if (spec_.family == YoungFamily::PhiRho) {
            const double bound = mean * std::pow(1.0 + log_plus(top / mean), spec_.param);
            return std::min(top, bound);
        }
        if (spec_.family == YoungFamily::Identity) return mean;
        return top / unit_root_;
    }

private:
    static double invert_unit(const YoungSpec& spec) {
        switch (spec.family) {
            case YoungFamily::PhiRho:
            case YoungFamily::Identity:
            case YoungFamily::Power:
                return 1.0;
            case YoungFamily::PsiS:
                return std::pow(std::log(2.0), 1.0 / spec.param);
            default:
                return 1.0;
        }
    }

    Sums sums(std::span<const double> values, std::span<const double> logs, double u) const {
        Sums s;
        const double scale = std::exp(-u);
        const double p = spec_.param;
        switch (spec_.family) {
            case YoungFamily::PhiRho:
                if (logs.empty()) {
                    for (double v : values) {
                        const double t = v * scale;
                        if (t <= 1.0 || p == 0.0) {
                            s.phi += t;
                            s.deriv += t;
                        } else {
                            const double z = 1.0 + std::log(t);
                            const double zp = p == 1.0 ? z : std::pow(z, p);
                            s.phi += t * zp;
                            s.deriv += t * zp * (1.0 + p / z);
                        }
                    }
                } else {
                    for (std::size_t i = 0; i < values.size(); ++i) {
                        const double lt = logs[i] - u;
                        const double t = values[i] * scale;
                        if (lt <= 0.0 || p == 0.0) {
                            s.phi += t;
                            s.deriv += t;
                        } else {
                            const double z = 1.0 + lt;
                            const double zp = p == 1.0 ? z : std::exp(p * std::log(z));
                            s.phi += t * zp;
                            s.deriv += t * zp * (1.0 + p / z);
                        }
                    }
                }
                break;
            case YoungFamily::PsiS:
                for (double v : values) {
                    const double t = v * scale;
                    const double ts = p == 1.0 ? t : std::pow(t, p);
                    if (ts > 700.0) return {kInf, kInf};
                    const double e = std::expm1(ts);
                    s.phi += e;
                    s.deriv += p * ts * (e + 1.0);
                }
                break;
            default:
                for (double v : values) {
                    const double t = v * scale;
                    s.phi += evaluate(spec_, t);
                    s.deriv += log_derivative_weight(spec_, t);
                }
                break;
        }
        return s;
    }

    YoungSpec spec_;
    bool convex_ = true;
    double unit_root_ = 1.0;
};

std::vector<double> abs_values(std::span<const double> values) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](double v) { return std::abs(v); });
    return out;
}

std::vector<double> logs_of(std::span<const double> values) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [](double v) { return v > 0.0 ? std::log(v) : -kInf; });
    return out;
}

void check_range(const GridFunction& f, CellRange q) {
    if (q.empty() || q.end > f.size()) throw DomainError("invalid cell range for a Luxemburg norm");
}

void check_tol(double tol) {
    if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("Luxemburg tolerance must be in (0, 1)");
}

// Dyadic-mode maximal function from per-node norms; norms(g, i) is the norm
// on dyadic node (g, i).
template <class NodeNorm>
std::vector<double> dyadic_sup(const UniformGrid& grid, NodeNorm&& norms) {
    const std::size_t n = grid.size();
    std::vector<double> out(n, 0.0);
    for (int g = 0; g <= grid.levels(); ++g) {
        const std::size_t width = n >> g;
        for (std::size_t i = 0; i < (std::size_t{1} << g); ++i) {
            const double v = norms(g, CellRange{i * width, (i + 1) * width});
            for (std::size_t c = i * width; c < (i + 1) * width; ++c) out[c] = std::max(out[c], v);
        }
    }
    return out;
}

}  // namespace

double luxemburg_norm(std::span<const double> samples, const YoungSpec& spec, double tol) {
    check_tol(tol);
    const LuxemburgKernel kernel(spec);
    const auto values = abs_values(samples);
    return kernel.solve(values, {}, tol);
}

double luxemburg_norm(const GridFunction& f, CellRange q, const YoungSpec& spec, double tol) {
    check_range(f, q);
    return luxemburg_norm(f.values().subspan(q.begin, q.size()), spec, tol);
}

double luxemburg_norm_primed(const GridFunction& f, CellRange q, const YoungSpec& spec,
                             double tol) {
    check_range(f, q);
    check_tol(tol);
    const auto values = abs_values(f.values().subspan(q.begin, q.size()));
    const double norm = LuxemburgKernel(spec).solve(values, {}, tol);
    if (norm == 0.0) return 0.0;

    const double count = static_cast<double>(values.size());
    const auto objective = [&](double log_mu) {
        const double mu = std::exp(log_mu);
        double acc = 0.0;
        for (double v : values) {
            acc += evaluate(spec, v / mu);
            if (!std::isfinite(acc)) return kInf;
        }
        return mu + mu * acc / count;
    };

    // mu + mu avg Phi(|f|/mu) is convex in mu, so unimodal in log mu. Its
    // minimiser is at most 2 * norm because the objective dominates mu.
    double lo = std::log(norm) - 40.0;
    double hi = std::log(2.0 * norm);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    double best = std::min({objective(std::log(norm)), f1, f2});
    while (hi - lo > 1e-12) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
            best = std::min(best, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
            best = std::min(best, f2);
        }
    }
    return best;
}

HolderSides generalized_holder(std::span<const GridFunction> fs, std::span<const YoungSpec> specs,
                               const YoungSpec& phi0, double kappa, CellRange q) {
    if (fs.empty() || fs.size() != specs.size())
        throw ConfigError("generalized_holder: need one Young function per factor");
    if (!(kappa > 0.0)) throw ConfigError("generalized_holder: kappa must be > 0");
    const auto grid = spot_check_grid();
    const double needed = inverse_condition_constant(phi0, specs, grid);
    if (needed > kappa * (1.0 + 1e-9)) {
        std::ostringstream msg;
        msg << "generalized_holder: inverse condition needs kappa >= " << needed << ", got "
            << kappa;
        throw PreconditionError(msg.str());
    }

    GridFunction product = fs.front();
    double rhs = static_cast<double>(fs.size()) * kappa;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i > 0) product *= fs[i];
        rhs *= luxemburg_norm(fs[i], q, specs[i]);
    }
    return {luxemburg_norm(product, q, phi0), rhs};
}

double exp_llog_pairing_kappa(std::span<const double> s_values) {
    if (s_values.empty()) throw ConfigError("exp_llog_pairing_kappa: need at least one s");
    std::vector<YoungSpec> specs;
    double inv_s = 0.0;
    for (double s : s_values) {
        if (!(s >= 1.0)) throw DomainError("exp_llog_pairing_kappa: every s_i must be >= 1");
        specs.push_back(YoungSpec::psi(s));
        inv_s += 1.0 / s;
    }
    specs.push_back(YoungSpec::phi(inv_s));
    const auto grid = spot_check_grid();
    return inverse_condition_constant(YoungSpec::identity(), specs, grid);
}

std::size_t auto_stride(std::size_t n) {
    return std::max<std::size_t>(1, n / kSeminormBreakpoints);
}

double osc_expls_norm(const GridFunction& b, double s, std::size_t stride) {
    if (!(s >= 1.0)) throw DomainError("osc_expls_norm: s must be >= 1");
    if (stride == 0) stride = auto_stride(b.size());
    const LuxemburgKernel kernel(YoungSpec::psi(s));
    const PrefixSums prefix(b.values());
    std::vector<double> dev(b.size());
    double best = 0.0;
    std::optional<double> guess;
    for_each_interval(b.size(), stride, [&](CellRange q) {
        if (q.size() < 2) return;
        const double mean = prefix.mean(q.begin, q.end);
        for (std::size_t i = q.begin; i < q.end; ++i) dev[i - q.begin] = std::abs(b[i] - mean);
        double solved = 0.0;
        const double v = kernel.solve(std::span<const double>(dev.data(), q.size()), {},
                                      kLuxemburgTol, guess, &solved);
        if (v > 0.0) guess = solved;
        best = std::max(best, v);
    });
    return best;
}

double bmo_seminorm(const GridFunction& b, std::size_t stride) {
    if (stride == 0) stride = auto_stride(b.size());
    const PrefixSums prefix(b.values());
    double best = 0.0;
    for_each_interval(b.size(), stride, [&](CellRange q) {
        const double mean = prefix.mean(q.begin, q.end);
        double acc = 0.0;
        for (std::size_t i = q.begin; i < q.end; ++i) acc += std::abs(b[i] - mean);
        best = std::max(best, acc / static_cast<double>(q.size()));
    });
    return best;
}

GridFunction orlicz_maximal(const GridFunction& f, const YoungSpec& spec, IntervalMode mode,
                            double tol) {
    check_tol(tol);
    const LuxemburgKernel kernel(spec);
    const auto values = abs_values(f.values());
    const auto logs = spec.family == YoungFamily::PhiRho ? logs_of(values) : std::vector<double>{};
    const std::span<const double> vspan(values);
    const std::span<const double> lspan(logs);
    const auto window_logs = [&](CellRange q) {
        return lspan.empty() ? lspan : lspan.subspan(q.begin, q.size());
    };

    auto dyadic = dyadic_sup(f.grid(), [&](int, CellRange q) {
        return kernel.solve(vspan.subspan(q.begin, q.size()), window_logs(q), tol);
    });
    if (mode == IntervalMode::Dyadic) return GridFunction(f.grid(), std::move(dyadic));

    // Every interval [s, e). The dyadic values are a pointwise lower bound,
    // so an interval whose cheap upper bound does not exceed the running
    // minimum of the current sup over it cannot change the result.
    const std::size_t n = f.size();
    std::vector<double> current = std::move(dyadic);
    std::vector<double> best_from(n + 1);
    for (std::size_t s = 0; s < n; ++s) {
        double sum = 0.0;
        double top = 0.0;
        double floor_min = kInf;
        std::optional<double> guess;
        std::fill(best_from.begin(), best_from.end(), 0.0);
        for (std::size_t e = s + 1; e <= n; ++e) {
            sum += values[e - 1];
            top = std::max(top, values[e - 1]);
            floor_min = std::min(floor_min, current[e - 1]);
            const double mean = sum / static_cast<double>(e - s);
            if (kernel.upper_bound(mean, top) <= floor_min) continue;
            const CellRange q{s, e};
            double solved = 0.0;
            const double v = kernel.solve(vspan.subspan(s, e - s), window_logs(q), tol, guess,
                                          &solved);
            if (v > 0.0) guess = solved;
            best_from[e] = v;
        }
        // best_from[e] is the norm of [s, e); cell x sees every e > x.
        double running = 0.0;
        for (std::size_t e = n; e > s; --e) {
            running = std::max(running, best_from[e]);
            current[e - 1] = std::max(current[e - 1], running);
        }
    }
    return GridFunction(f.grid(), std::move(current));
}

}  // namespace czw
