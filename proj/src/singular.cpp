#include "czw/singular.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "czw/error.hpp"
#include "czw/orlicz.hpp"

namespace czw {

namespace {

constexpr double kInvPi = 1.0 / std::numbers::pi;

// Pairwise kernel sum around `cell`:
//   sum_{d >= 1} (term(cell - d) - term(cell + d)) / d,
// with out-of-range terms dropped.
template <class Term>
double kernel_sum(std::size_t n, std::size_t cell, Term&& term) {
    double acc = 0.0;
    const std::size_t reach = std::max(cell, n - 1 - cell);
    for (std::size_t d = 1; d <= reach; ++d) {
        const double left = d <= cell ? term(cell - d) : 0.0;
        const double right = cell + d < n ? term(cell + d) : 0.0;
        acc += (left - right) / static_cast<double>(d);
    }
    return kInvPi * acc;
}

std::vector<std::size_t> mask_indices(std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; mask >> i; ++i)
        if (mask & (std::uint32_t{1} << i)) out.push_back(i);
    return out;
}

void check_mask(const SymbolSet& bs, std::uint32_t mask) {
    if (mask & ~bs.full_mask()) throw DomainError("symbol subset refers to a missing symbol");
}

}  // namespace

double hilbert_at(const GridFunction& f, std::size_t cell) {
    if (cell >= f.size()) throw DomainError("hilbert_at: cell out of range");
    const auto v = f.values();
    return kernel_sum(v.size(), cell, [&](std::size_t j) { return v[j]; });
}

GridFunction hilbert(const GridFunction& f) {
    GridFunction out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = hilbert_at(f, i);
    return out;
}

struct SymbolSet::Cache {
    std::mutex lock;
    std::vector<std::optional<double>> seminorms;
};

SymbolSet::SymbolSet(std::vector<GridFunction> symbols, std::vector<double> s_params,
                     std::size_t seminorm_stride)
    : symbols_(std::move(symbols)),
      s_(std::move(s_params)),
      stride_(seminorm_stride),
      cache_(std::make_shared<Cache>()) {
    if (symbols_.empty()) throw DomainError("SymbolSet: need at least one symbol");
    if (symbols_.size() > 16) throw DomainError("SymbolSet: at most 16 symbols");
    if (s_.size() != symbols_.size())
        throw DomainError("SymbolSet: one s parameter per symbol required");
    for (double s : s_)
        if (!(s >= 1.0) || !std::isfinite(s)) throw DomainError("SymbolSet: every s_i must be >= 1");
    for (const auto& b : symbols_) require_same_grid(symbols_.front(), b, "SymbolSet");
    cache_->seminorms.resize(symbols_.size());
}

double SymbolSet::s_total() const { return s_total(full_mask()); }

double SymbolSet::s_total(std::uint32_t mask) const {
    check_mask(*this, mask);
    double inv = 0.0;
    for (std::size_t i : mask_indices(mask)) inv += 1.0 / s_[i];
    return inv > 0.0 ? 1.0 / inv : HUGE_VAL;
}

double SymbolSet::seminorm(std::size_t i) const {
    if (i >= size()) throw DomainError("SymbolSet: symbol index out of range");
    std::lock_guard guard(cache_->lock);
    auto& slot = cache_->seminorms[i];
    if (!slot) slot = osc_expls_norm(symbols_[i], s_[i], stride_);
    return *slot;
}

double SymbolSet::norm() const { return norm(full_mask()); }

double SymbolSet::norm(std::uint32_t mask) const {
    check_mask(*this, mask);
    double out = 1.0;
    for (std::size_t i : mask_indices(mask)) out *= seminorm(i);
    return out;
}

double commutator_at(const GridFunction& b, const GridFunction& f, std::size_t cell) {
    require_same_grid(b, f, "commutator");
    if (cell >= f.size()) throw DomainError("commutator_at: cell out of range");
    const auto bv = b.values();
    const auto fv = f.values();
    const double bx = bv[cell];
    return kernel_sum(fv.size(), cell, [&](std::size_t j) { return (bx - bv[j]) * fv[j]; });
}

GridFunction commutator(const GridFunction& b, const GridFunction& f) {
    require_same_grid(b, f, "commutator");
    GridFunction out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = commutator_at(b, f, i);
    return out;
}

double multilinear_commutator_at(const SymbolSet& bs, std::uint32_t mask, const GridFunction& f,
                                 std::size_t cell) {
    check_mask(bs, mask);
    require_same_grid(bs.symbol(0), f, "multilinear_commutator");
    if (cell >= f.size()) throw DomainError("multilinear_commutator_at: cell out of range");
    const auto idx = mask_indices(mask);
    const auto fv = f.values();
    if (idx.empty()) return kernel_sum(fv.size(), cell, [&](std::size_t j) { return fv[j]; });
    std::vector<std::span<const double>> sym;
    std::vector<double> at_x;
    for (std::size_t i : idx) {
        sym.push_back(bs.symbol(i).values());
        at_x.push_back(sym.back()[cell]);
    }
    if (sym.size() <= 2) {
        return kernel_sum(fv.size(), cell, [&](std::size_t j) {
            double prod = at_x[0] - sym[0][j];
            if (sym.size() == 2) prod *= at_x[1] - sym[1][j];
            return prod * fv[j];
        });
    }
    // Factors multiplied in sorted order so that permuting the symbols is exact.
    std::vector<double> factors(sym.size());
    return kernel_sum(fv.size(), cell, [&](std::size_t j) {
        for (std::size_t l = 0; l < sym.size(); ++l) factors[l] = at_x[l] - sym[l][j];
        std::sort(factors.begin(), factors.end());
        double prod = factors[0];
        for (std::size_t l = 1; l < factors.size(); ++l) prod *= factors[l];
        return prod * fv[j];
    });
}

GridFunction multilinear_commutator(const SymbolSet& bs, std::uint32_t mask, const GridFunction& f) {
    check_mask(bs, mask);
    require_same_grid(bs.symbol(0), f, "multilinear_commutator");
    GridFunction out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = multilinear_commutator_at(bs, mask, f, i);
    return out;
}

std::vector<int> expansion_multiplicities(std::size_t k) {
    if (k < 1 || k > 16) throw DomainError("expansion_multiplicities: k must be in [1, 16]");
    const std::uint32_t full = (std::uint32_t{1} << k) - 1;
    std::vector<int> c(std::size_t{1} << k, 0);
    // sigma = empty contributes (-1)^k H((b-lambda)_b f) directly.
    c[0] += (k % 2 == 0) ? 1 : -1;
    // Each proper nonempty sigma contributes (-1)^{k-#sigma} T_tau(...) for every tau in sigma.
    for (std::uint32_t sigma = 1; sigma < full; ++sigma) {
        const int sign = ((k - std::popcount(sigma)) % 2 == 0) ? 1 : -1;
        for (std::uint32_t tau = sigma;; tau = (tau - 1) & sigma) {
            c[tau] += sign;
            if (tau == 0) break;
        }
    }
    c[full] = 0;
    return c;
}

double IdentityReport::residual() const { return std::max(residual_expanded, residual_summarized); }

IdentityReport expand_commutator_identity(const SymbolSet& bs, std::span<const double> lambda,
                                          const GridFunction& f,
                                          std::span<const std::size_t> cells) {
    const std::size_t k = bs.size();
    if (k < 2) throw DomainError("expand_commutator_identity: need at least two symbols");
    if (lambda.size() != k) throw DomainError("expand_commutator_identity: one lambda per symbol");
    require_same_grid(bs.symbol(0), f, "expand_commutator_identity");
    const std::uint32_t full = bs.full_mask();

    // (b - lambda)_{sigma'} f for every sigma.
    std::vector<GridFunction> shifted;
    for (std::size_t i = 0; i < k; ++i)
        shifted.push_back(bs.symbol(i).map([l = lambda[i]](double v) { return v - l; }));
    std::vector<GridFunction> weighted;
    for (std::uint32_t sigma = 0; sigma <= full; ++sigma) {
        GridFunction g = f;
        for (std::size_t i : mask_indices(full & ~sigma)) g *= shifted[i];
        weighted.push_back(std::move(g));
    }

    IdentityReport report;
    report.k = k;
    report.samples = cells.size();
    report.multiplicity = expansion_multiplicities(k);
    for (std::size_t cell : cells) {
        const double lhs = multilinear_commutator_at(bs, full, f, cell);
        report.scale = std::max(report.scale, std::abs(lhs));

        const auto at_x = [&](std::uint32_t sigma) {
            double prod = 1.0;
            for (std::size_t i : mask_indices(sigma)) prod *= shifted[i][cell];
            return prod;
        };

        double expanded = 0.0;
        for (std::uint32_t sigma = 0; sigma <= full; ++sigma) {
            const int sign = ((k - std::popcount(sigma)) % 2 == 0) ? 1 : -1;
            const double term = sign * at_x(sigma) * hilbert_at(weighted[sigma], cell);
            report.scale = std::max(report.scale, std::abs(term));
            expanded += term;
        }
        report.residual_expanded = std::max(report.residual_expanded, std::abs(expanded - lhs));

        double summarized = at_x(full) * hilbert_at(f, cell);
        report.scale = std::max(report.scale, std::abs(summarized));
        for (std::uint32_t tau = 0; tau < full; ++tau) {
            const int c = report.multiplicity[tau];
            if (c == 0) continue;
            const double term = c * multilinear_commutator_at(bs, tau, weighted[tau], cell);
            report.scale = std::max(report.scale, std::abs(term));
            summarized += term;
        }
        report.residual_summarized =
            std::max(report.residual_summarized, std::abs(summarized - lhs));
    }
    return report;
}

std::string SymbolSpec::name() const {
    std::ostringstream out;
    switch (kind) {
        case SymbolKind::Constant: out << "constant(" << value << ")"; break;
        case SymbolKind::Log: out << "log"; break;
        case SymbolKind::AbsLogPower: out << "abslog_power(s=" << s << ")"; break;
        case SymbolKind::StepBmo: out << "step_bmo"; break;
        case SymbolKind::RandomBmo: out << "random_bmo(seed=" << seed << ")"; break;
    }
    return out.str();
}

SymbolSpec SymbolSpec::parse(const std::string& kind, double s, std::uint64_t seed) {
    SymbolSpec spec;
    spec.s = s;
    spec.seed = seed;
    if (kind == "constant") spec.kind = SymbolKind::Constant;
    else if (kind == "log") spec.kind = SymbolKind::Log;
    else if (kind == "abslog_power") spec.kind = SymbolKind::AbsLogPower;
    else if (kind == "step_bmo") spec.kind = SymbolKind::StepBmo;
    else if (kind == "random_bmo") spec.kind = SymbolKind::RandomBmo;
    else throw ConfigError("unknown symbol kind: " + kind);
    return spec;
}

GridFunction make_symbol(const SymbolSpec& spec, const UniformGrid& grid) {
    // Midpoints never coincide with a cell edge, so |x| > 0 whenever 0 is an
    // edge; otherwise the cell containing 0 is evaluated at its midpoint
    // offset by a quarter cell.
    const double floor = 0.25 * grid.spacing();
    const auto safe_abs = [floor](double x) { return std::max(std::abs(x), floor); };
    switch (spec.kind) {
        case SymbolKind::Constant:
            return GridFunction::constant(grid, spec.value);
        case SymbolKind::Log:
            return GridFunction::sample(grid, [&](double x) { return std::log(safe_abs(x)); });
        case SymbolKind::AbsLogPower: {
            if (!(spec.s >= 1.0)) throw DomainError("abslog_power symbol: s must be >= 1");
            return GridFunction::sample(grid, [&](double x) {
                return std::pow(std::abs(std::log(safe_abs(x))), 1.0 / spec.s);
            });
        }
        case SymbolKind::StepBmo:
            return GridFunction::sample(grid, [](double x) { return x > 0.0 ? 1.0 : 0.0; });
        case SymbolKind::RandomBmo: {
            std::mt19937_64 rng(spec.seed);
            constexpr int kPoles = 4;
            double pole[kPoles];
            double coef[kPoles];
            double total = 0.0;
            for (int j = 0; j < kPoles; ++j) {
                const auto edge = static_cast<double>(rng() % (grid.size() + 1));
                pole[j] = grid.a() + edge * grid.spacing();
                coef[j] = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
                total += std::abs(coef[j]);
            }
            for (double& c : coef) c /= std::max(total, 1e-300);
            return GridFunction::sample(grid, [&](double x) {
                double acc = 0.0;
                for (int j = 0; j < kPoles; ++j) acc += coef[j] * std::log(safe_abs(x - pole[j]));
                return acc;
            });
        }
    }
    throw DomainError("unknown symbol kind");
}

}  // namespace czw
