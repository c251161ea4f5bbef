#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "czw/grid.hpp"

namespace czw {

/// Discrete principal-value Hilbert transform:
///   Hf(x_i) = (h/pi) sum_{j != i} f_j / (x_i - x_j) = (1/pi) sum_{j != i} f_j / (i - j).
/// Terms are summed pairwise by distance, nearest first, so the result is
/// exactly odd under reflection of a symmetric grid.
GridFunction hilbert(const GridFunction& f);

/// Hf at a single cell, O(n).
double hilbert_at(const GridFunction& f, std::size_t cell);

/// Symbols b_1..b_k with their Osc_{exp L^{s_i}} exponents. Copies share the
/// lazily computed seminorm cache.
class SymbolSet {
public:
    SymbolSet(std::vector<GridFunction> symbols, std::vector<double> s_params,
              std::size_t seminorm_stride = 0);

    std::size_t size() const { return symbols_.size(); }
    const GridFunction& symbol(std::size_t i) const { return symbols_[i]; }
    const std::vector<GridFunction>& symbols() const { return symbols_; }
    double s(std::size_t i) const { return s_[i]; }
    const UniformGrid& grid() const { return symbols_.front().grid(); }

    /// s with 1/s = sum 1/s_i over the whole set, or over `mask` (bit i set
    /// means b_i is included). The empty subset has 1/s = 0 and returns inf.
    double s_total() const;
    double s_total(std::uint32_t mask) const;

    /// ||b_i||_{Osc_{exp L^{s_i}}} measured by osc_expls_norm with the set's stride.
    double seminorm(std::size_t i) const;
    /// Product of seminorms over the whole set, or over `mask`; 1 for the empty set.
    double norm() const;
    double norm(std::uint32_t mask) const;

    std::uint32_t full_mask() const { return (std::uint32_t{1} << size()) - 1; }

private:
    struct Cache;
    std::vector<GridFunction> symbols_;
    std::vector<double> s_;
    std::size_t stride_ = 0;
    std::shared_ptr<Cache> cache_;
};

/// [b, H]f = b Hf - H(bf), evaluated as the kernel sum
/// (1/pi) sum_{j != i} (b_i - b_j) f_j / (i - j), which vanishes identically
/// for constant b.
GridFunction commutator(const GridFunction& b, const GridFunction& f);
double commutator_at(const GridFunction& b, const GridFunction& f, std::size_t cell);

/// T_sigma f(x_i) = (1/pi) sum_{j != i} prod_{l in sigma}(b_l(x_i) - b_l(x_j)) f_j / (i - j),
/// sigma given as a bit mask over the set. The empty subset gives hilbert(f);
/// a single symbol gives commutator(b, f) bit for bit.
GridFunction multilinear_commutator(const SymbolSet& bs, std::uint32_t mask, const GridFunction& f);
double multilinear_commutator_at(const SymbolSet& bs, std::uint32_t mask, const GridFunction& f,
                                 std::size_t cell);

struct IdentityReport {
    std::size_t k = 0;
    std::size_t samples = 0;
    double scale = 0.0;               // largest |term| seen across both routes
    double residual_expanded = 0.0;   // sum over all sigma of signed products
    double residual_summarized = 0.0; // multiplicity-weighted T_sigma terms
    std::vector<int> multiplicity;    // c_sigma indexed by mask; entry 0 is c_k
    double residual() const;
};

/// Checks the expansion of T_b f around constants lambda_1..lambda_k at the
/// given cells, in two forms:
///   expanded:   T_b f = sum_{sigma} (-1)^{k-#sigma} (b(x)-lambda)_sigma H((b-lambda)_{sigma'} f)(x)
///   summarized: T_b f = (b(x)-lambda)_b Hf(x) + sum_{tau != b} c_tau T_tau((b-lambda)_{tau'} f)(x)
/// where c_tau counts, with sign, how often T_tau arises when each
/// (b(x)-lambda)_sigma is rewritten as ((b(x)-b(y)) + (b(y)-lambda))_sigma.
/// Requires k >= 2.
IdentityReport expand_commutator_identity(const SymbolSet& bs, std::span<const double> lambda,
                                          const GridFunction& f, std::span<const std::size_t> cells);

/// Multiplicities c_tau for k symbols, indexed by mask (c_0 is the
/// coefficient of H((b-lambda)_b f)).
std::vector<int> expansion_multiplicities(std::size_t k);

enum class SymbolKind { Constant, Log, AbsLogPower, StepBmo, RandomBmo };

struct SymbolSpec {
    SymbolKind kind = SymbolKind::Log;
    double s = 1.0;          // AbsLogPower: |ln|x||^{1/s}
    double value = 1.0;      // Constant
    std::uint64_t seed = 0;  // RandomBmo

    std::string name() const;
    /// "constant", "log", "abslog_power", "step_bmo", "random_bmo".
    static SymbolSpec parse(const std::string& kind, double s = 1.0, std::uint64_t seed = 0);
};

/// Symbols sampled at cell midpoints:
///   constant       b = value
///   log            b = ln|x|
///   abslog_power   b = |ln|x||^{1/s}
///   step_bmo       b = 1 for x > 0, 0 otherwise
///   random_bmo     b = sum_j c_j ln|x - x_j|, seeded; the x_j sit on cell
///                  edges and sum |c_j| = 1
GridFunction make_symbol(const SymbolSpec& spec, const UniformGrid& grid);

}  // namespace czw
