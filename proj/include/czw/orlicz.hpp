#pragma once

#include <span>
#include <vector>

#include "czw/grid.hpp"
#include "czw/mode.hpp"
#include "czw/young.hpp"

namespace czw {

inline constexpr double kLuxemburgTol = 1e-10;

/// ||f||_{Phi,Q} = inf{lambda > 0 : avg_Q Phi(|f|/lambda) <= 1}.
///
/// The returned lambda satisfies avg_Q Phi(|f|/lambda) in [1 - tol, 1]; it is
/// 0 when f vanishes on Q. The root is located in log(lambda) by a Newton
/// iteration safeguarded by a Jensen bracket, falling back to bisection.
double luxemburg_norm(const GridFunction& f, CellRange q, const YoungSpec& spec,
                      double tol = kLuxemburgTol);

/// Same, on a bare sequence of samples (absolute values are taken).
double luxemburg_norm(std::span<const double> samples, const YoungSpec& spec,
                      double tol = kLuxemburgTol);

/// inf_mu { mu + mu * avg_Q Phi(|f|/mu) }, the equivalent norm; lies between
/// luxemburg_norm and twice it.
double luxemburg_norm_primed(const GridFunction& f, CellRange q, const YoungSpec& spec,
                             double tol = kLuxemburgTol);

struct HolderSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// ||f_1 ... f_k||_{Phi_0,Q} against k * kappa * prod ||f_i||_{Phi_i,Q}.
/// Throws PreconditionError if the inverse condition with this kappa fails
/// on the spot-check grid.
HolderSides generalized_holder(std::span<const GridFunction> fs, std::span<const YoungSpec> specs,
                               const YoungSpec& phi0, double kappa, CellRange q);

/// Smallest kappa for the exponential/L log L pairing
/// Psi_{s_1}^{-1} ... Psi_{s_k}^{-1} Phi_{1/s}^{-1} <= kappa * t, measured on
/// the spot-check grid.
double exp_llog_pairing_kappa(std::span<const double> s_values);

/// Number of breakpoints used by default when scanning all intervals of a
/// fine grid for a seminorm.
inline constexpr std::size_t kSeminormBreakpoints = 128;

/// Stride used when `stride == 0` is requested: 1 up to 128 cells, n/128 above.
std::size_t auto_stride(std::size_t n);

/// sup_Q ||b - b_Q||_{Psi_s,Q} over intervals whose endpoints lie on the
/// stride lattice; a lower bound of the continuum Osc_{exp L^s} seminorm.
double osc_expls_norm(const GridFunction& b, double s, std::size_t stride = 0);

/// sup_Q avg_Q |b - b_Q| over the same family of intervals.
double bmo_seminorm(const GridFunction& b, std::size_t stride = 0);

/// M_Phi f(x) = sup over intervals containing x of ||f||_{Phi,Q}.
GridFunction orlicz_maximal(const GridFunction& f, const YoungSpec& spec, IntervalMode mode,
                            double tol = kLuxemburgTol);

}  // namespace czw
