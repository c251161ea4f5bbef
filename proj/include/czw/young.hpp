#pragma once

#include <span>
#include <string>
#include <vector>

namespace czw {

enum class YoungFamily {
    PhiRho,     // t (1 + log+ t)^rho
    PsiS,       // exp(t^s) - 1
    XRho,       // t / (1 + log+ t)^rho
    XTildeRho,  // t / (1 + log+(t / rho^rho))^rho, rho > 1
    Power,      // t^r
    Identity,   // t
};

/// A member of one of the parametric scalar families used throughout the
/// Orlicz machinery. `param` is rho, s or r depending on the family and is
/// ignored for Identity.
struct YoungSpec {
    YoungFamily family = YoungFamily::Identity;
    double param = 1.0;

    static YoungSpec phi(double rho) { return {YoungFamily::PhiRho, rho}; }
    static YoungSpec psi(double s) { return {YoungFamily::PsiS, s}; }
    static YoungSpec x(double rho) { return {YoungFamily::XRho, rho}; }
    static YoungSpec x_tilde(double rho) { return {YoungFamily::XTildeRho, rho}; }
    static YoungSpec power(double r) { return {YoungFamily::Power, r}; }
    static YoungSpec identity() { return {YoungFamily::Identity, 1.0}; }

    /// Throws DomainError when the parameter is outside the family's range.
    void validate() const;

    /// True for the families that are genuine Young functions (convex) with
    /// this parameter.
    bool is_convex() const;

    std::string describe() const;

    friend bool operator==(const YoungSpec&, const YoungSpec&) = default;
};

/// max(ln t, 0), with log_plus(0) = 0.
double log_plus(double t);

/// Closed-form value of the family at t >= 0. PsiS returns +inf once
/// t^s exceeds 700.
double evaluate(const YoungSpec& spec, double t);

/// t * Phi'(t); used by the Newton steps of the Luxemburg solver.
double log_derivative_weight(const YoungSpec& spec, double t);

/// Bracketing + bisection inverse: returns t with
/// |evaluate(spec, t) - y| <= tol * max(1, y). invert(spec, 0) == 0.
double invert(const YoungSpec& spec, double y, double tol = 1e-12);

struct BoundTriple {
    double lower = 0.0;
    double value = 0.0;
    double upper = 0.0;

    /// lower <= value <= upper with relative slack `rel`.
    bool ordered(double rel = 1e-12) const;
};

// (1/(1+rho))^rho t <= X_rho(A_rho(t)) <= t
BoundTriple check_x_of_phi(double t, double rho);

// (1 - 1/e)^rho t <= A_rho(X~_rho(t)) <= t (1 + rho ln rho)^rho, rho > 1
BoundTriple check_phi_of_x_tilde(double t, double rho);

/// Log-spaced abscissae on which inverse conditions are spot-checked.
std::vector<double> spot_check_grid(double t_min = 1e-8, double t_max = 1e16,
                                    std::size_t points = 1200);

/// sup over the spot-check grid of
/// Phi_1^{-1}(t) ... Phi_k^{-1}(t) / Phi_0^{-1}(t); the smallest kappa for
/// which the inverse condition holds on that grid.
double inverse_condition_constant(const YoungSpec& phi0, std::span<const YoungSpec> phis,
                                  std::span<const double> t_grid);

struct ProductBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Phi_0(x_1 ... x_k / kappa) against Phi_1(x_1) + ... + Phi_k(x_k).
/// Throws PreconditionError when the inverse condition with the given kappa
/// fails on the spot-check grid.
ProductBound check_scalar_product_bound(const YoungSpec& phi0, std::span<const YoungSpec> phis,
                                        double kappa, std::span<const double> xs);

}  // namespace czw
