#pragma once

#include <cstddef>
#include <vector>

#include "czw/grid.hpp"
#include "czw/mode.hpp"
#include "czw/weights.hpp"

namespace czw {

struct CZCube {
    DyadicInterval interval;
    CellRange cells;
    double average = 0.0;  // average of |f| over the cube
    DilatedRange dilate;   // 5Q, clamped to the domain
};

struct CZDecomposition {
    double lambda = 0.0;
    std::vector<CZCube> cubes;     // maximal dyadic intervals with average |f| > lambda
    GridFunction good;             // f off Omega, f_Q on each cube
    std::vector<GridFunction> bad; // (f - f_Q) chi_Q, one per cube
    std::vector<bool> omega;       // union of the cubes
    std::vector<bool> dilated;     // union of the 5Q

    double omega_measure(const UniformGrid& grid) const;

    /// w restricted to the complement of the dilates, i.e. w chi_{R \ union 5Q_j}.
    GridFunction weight_off_dilates(const GridFunction& w) const;
};

/// Stopping-time decomposition at height lambda. Requires avg(|f|) over
/// the whole domain to be <= lambda; throws PreconditionError otherwise.
CZDecomposition cz_decompose(const GridFunction& f, double lambda);

/// S(h) = M(h v^{1/p}) / v^{1/p}.
GridFunction rdf_S(const GridFunction& h, const Weight& v, double p, IntervalMode mode);

struct RdFDiagnostics {
    // (i) min over cells of Rh - h; >= 0 passes.
    double domination_margin = 0.0;
    // (ii) ||Rh||_{L^p(v)} / ||h||_{L^p(v)}; <= 2 passes (0 when h = 0).
    double norm_ratio = 0.0;
    // (iii) max over cells of S(Rh) / (2B Rh); <= 1 passes.
    double a1_ratio = 0.0;
    // Measured A_1 constant of Rh v^{1/p} over all intervals.
    double a1_of_product = 0.0;

    bool domination_ok() const { return domination_margin >= 0.0; }
    bool norm_ok() const { return norm_ratio <= 2.0; }
    bool a1_ok() const { return a1_ratio <= 1.0 + 1e-12; }
};

struct RdFResult {
    Weight v;
    double p = 0.0;
    double B = 0.0;              // surrogate for ||S||, times the safety factor
    double norm_estimate = 0.0;  // power-iteration estimate of ||S|| (B / safety)
    int terms = 0;               // K
    double tail_factor = 0.0;    // beta multiplying the last term
    double tail_fraction = 0.0;  // ||beta a_K||_{L^p(v)} / ||Rh||_{L^p(v)}
    GridFunction Rh;
    RdFDiagnostics diagnostics;
};

inline constexpr int kRdFTerms = 16;
inline constexpr int kPowerIterations = 20;

/// Estimates ||S||_{L^p(v)} along the orbit of h: the largest ratio
/// ||S u|| / ||u|| over kPowerIterations steps. Throws EstimationError if the
/// ratio has not settled (last relative change > 1e-2).
double estimate_S_norm(const GridFunction& h, const Weight& v, double p, IntervalMode mode);

/// Rh = sum_{k < K} a_k + beta a_K, a_k = S^k(h) / (2B)^k, where
/// beta = (1 + 1e-9) / (1 - q) and q = max_x a_{K+1}(x) / a_K(x) sums the
/// tail as if it continued geometrically at the worst observed rate. This
/// closing term makes S(Rh) <= 2B Rh follow from sublinearity of S.
/// B = safety * estimate_S_norm. Requires h >= 0, p > 1, K >= 1, safety >= 1.
RdFResult rdf_build(const GridFunction& h, const Weight& v, double p, int K = kRdFTerms,
                    double safety = 2.0, IntervalMode mode = IntervalMode::AllIntervals);

/// Same construction with a prescribed B.
RdFResult rdf_build_with_norm(const GridFunction& h, const Weight& v, double p, int K, double B,
                              IntervalMode mode = IntervalMode::AllIntervals);

}  // namespace czw
