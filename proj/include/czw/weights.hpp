#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "czw/grid.hpp"
#include "czw/mode.hpp"

namespace czw {

/// Strictly positive grid function with compute-once caches for its
/// Muckenhoupt and Fujii constants. Copies share the cache.
class Weight {
public:
    explicit Weight(GridFunction w);

    const GridFunction& function() const { return w_; }
    const UniformGrid& grid() const { return w_.grid(); }
    double operator[](std::size_t i) const { return w_[i]; }
    std::size_t size() const { return w_.size(); }

    double a1() const;
    double ap(double p) const;
    double fujii(IntervalMode mode) const;

private:
    struct Cache {
        std::mutex lock;
        std::optional<double> a1;
        std::map<double, double> ap;
        std::map<IntervalMode, double> fujii;
    };

    GridFunction w_;
    std::shared_ptr<Cache> cache_;
};

// max over grid-aligned intervals of avg_Q w / min_Q w.
double a1_constant(const GridFunction& w);

// sup_Q avg_Q(w) * avg_Q(w^{-1/(p-1)})^{p-1}; p > 1.
double ap_constant(const GridFunction& w, double p);

/// sup_Q (1/w(Q)) * integral_Q M(chi_Q w). With all-intervals mode every
/// grid-aligned Q and the full maximal function are used; dyadic mode uses
/// dyadic Q and the dyadic maximal function.
double fujii_constant(const GridFunction& w, IntervalMode mode);

struct ReverseHolderReport {
    double tau = 0.0;
    double fujii = 0.0;
    double exponent = 0.0;  // r_w = 1 + 1/(tau [w]_{A_inf})
    double worst_ratio = 0.0;
    CellRange worst_interval;
};

/// max over intervals of (avg_Q w^{r_w})^{1/r_w} / (2 avg_Q w).
ReverseHolderReport reverse_holder_check(const Weight& w, double tau, IntervalMode mode);

enum class WeightKind { Constant, Step, Power, LogLike, RandomAInf };

struct WeightSpec {
    WeightKind kind = WeightKind::Constant;
    double alpha = 0.0;         // Power: exponent in (-1, 1)
    std::uint64_t seed = 0;     // RandomAInf
    double oscillation = 1.0;   // RandomAInf: sup |log w|

    std::string name() const;
};

/// Test weights:
///   constant      w = 1
///   step          w = 1 on the left half of the domain, 2 on the right half
///   power(alpha)  w = |x|^alpha at cell midpoints, alpha in (-1, 1)
///   loglike       w = 1 + log+(1/|x|)
///   random-A_inf  w = exp(phi), phi a seeded trigonometric sum with sup|phi| = bound,
///                 so [w]_{A_1} <= exp(2 bound)
Weight make_weight(const WeightSpec& spec, const UniformGrid& grid);

/// The fixed generator menu used for calibration and acceptance.
std::vector<WeightSpec> weight_menu();

/// Smallest tau for which every menu weight passes reverse_holder_check,
/// found by bisection in log tau, multiplied by `safety`.
double calibrate_tau(const UniformGrid& grid, IntervalMode mode, double safety = 2.0);

/// Frozen calibration (menu at n = 2^10 on [-1, 1], all intervals, safety 2);
/// regenerate with `cz calibrate-tau`.
inline constexpr double kCalibratedTau = 0.651;

}  // namespace czw
