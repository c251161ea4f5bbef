#include "czw/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "czw/error.hpp"

namespace czw {

namespace {

constexpr double kPsiOverflowExponent = 700.0;

void require_argument(double t) {
    if (!std::isfinite(t) || t < 0.0) {
        std::ostringstream msg;
        msg << "Young function argument must be finite and >= 0, got " << t;
        throw DomainError(msg.str());
    }
}

double tilde_threshold(double rho) { return std::pow(rho, rho); }

}  // namespace

void YoungSpec::validate() const {
    const auto bad = [this](const char* what) {
        std::ostringstream msg;
        msg << describe() << ": " << what;
        throw DomainError(msg.str());
    };
    if (!std::isfinite(param)) bad("parameter must be finite");
    switch (family) {
        case YoungFamily::PhiRho:
        case YoungFamily::XRho:
            if (param < 0.0) bad("rho must be >= 0");
            break;
        case YoungFamily::PsiS:
            if (param <= 0.0) bad("s must be > 0");
            break;
        case YoungFamily::XTildeRho:
            if (param <= 1.0) bad("rho must be > 1");
            break;
        case YoungFamily::Power:
            if (param <= 0.0) bad("r must be > 0");
            break;
        case YoungFamily::Identity:
            break;
    }
}

bool YoungSpec::is_convex() const {
    switch (family) {
        case YoungFamily::PhiRho:
        case YoungFamily::Identity:
            return true;
        case YoungFamily::PsiS:
        case YoungFamily::Power:
            return param >= 1.0;
        case YoungFamily::XRho:
            return param == 0.0;
        case YoungFamily::XTildeRho:
            return false;
    }
    return false;
}

std::string YoungSpec::describe() const {
    std::ostringstream out;
    switch (family) {
        case YoungFamily::PhiRho: out << "phi(rho=" << param << ")"; break;
        case YoungFamily::PsiS: out << "psi(s=" << param << ")"; break;
        case YoungFamily::XRho: out << "x(rho=" << param << ")"; break;
        case YoungFamily::XTildeRho: out << "x_tilde(rho=" << param << ")"; break;
        case YoungFamily::Power: out << "power(r=" << param << ")"; break;
        case YoungFamily::Identity: out << "identity"; break;
    }
    return out.str();
}

double log_plus(double t) { return t > 1.0 ? std::log(t) : 0.0; }

double evaluate(const YoungSpec& spec, double t) {
    require_argument(t);
    if (t == 0.0) return 0.0;
    const double p = spec.param;
    switch (spec.family) {
        case YoungFamily::PhiRho:
            if (t <= 1.0 || p == 0.0) return t;
            return t * std::pow(1.0 + std::log(t), p);
        case YoungFamily::PsiS: {
            const double u = std::pow(t, p);
            if (u > kPsiOverflowExponent) return std::numeric_limits<double>::infinity();
            return std::expm1(u);
        }
        case YoungFamily::XRho:
            if (t <= 1.0 || p == 0.0) return t;
            return t / std::pow(1.0 + std::log(t), p);
        case YoungFamily::XTildeRho: {
            const double ratio = t / tilde_threshold(p);
            if (ratio <= 1.0) return t;
            return t / std::pow(1.0 + std::log(ratio), p);
        }
        case YoungFamily::Power:
            return std::pow(t, p);
        case YoungFamily::Identity:
            return t;
    }
    return t;
}

double log_derivative_weight(const YoungSpec& spec, double t) {
    require_argument(t);
    if (t == 0.0) return 0.0;
    const double p = spec.param;
    switch (spec.family) {
        case YoungFamily::PhiRho: {
            if (t <= 1.0 || p == 0.0) return t;
            const double z = 1.0 + std::log(t);
            const double zp = std::pow(z, p);
            return t * (zp + p * zp / z);
        }
        case YoungFamily::PsiS: {
            const double u = std::pow(t, p);
            if (u > kPsiOverflowExponent) return std::numeric_limits<double>::infinity();
            return p * u * std::exp(u);
        }
        case YoungFamily::XRho: {
            if (t <= 1.0 || p == 0.0) return t;
            const double z = 1.0 + std::log(t);
            return t / std::pow(z, p) * (1.0 - p / z);
        }
        case YoungFamily::XTildeRho: {
            const double ratio = t / tilde_threshold(p);
            if (ratio <= 1.0) return t;
            const double z = 1.0 + std::log(ratio);
            return t / std::pow(z, p) * (1.0 - p / z);
        }
        case YoungFamily::Power:
            return p * std::pow(t, p);
        case YoungFamily::Identity:
            return t;
    }
    return t;
}

double invert(const YoungSpec& spec, double y, double tol) {
    if (!(tol > 0.0)) throw ConfigError("invert: tolerance must be > 0");
    if (!std::isfinite(y) || y < 0.0) throw DomainError("invert: target must be finite and >= 0");
    spec.validate();
    if (spec.family == YoungFamily::XRho && spec.param > 1.0)
        throw PreconditionError("invert: " + spec.describe() + " is not increasing");
    if (spec.family == YoungFamily::XTildeRho)
        throw PreconditionError("invert: " + spec.describe() + " is not increasing");
    if (y == 0.0) return 0.0;
    if (spec.family == YoungFamily::Identity) return y;

    double lo = 0.0;
    double hi = 1.0;
    while (evaluate(spec, hi) < y) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw EstimationError("invert: bracket overflow");
    }
    const double slack = tol * std::max(1.0, y);
    for (int iter = 0; iter < 4000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) return mid;
        const double v = evaluate(spec, mid);
        if (std::abs(v - y) <= slack) return mid;
        if (v < y) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

bool BoundTriple::ordered(double rel) const {
    const double scale = std::max({std::abs(lower), std::abs(value), std::abs(upper),
                                   std::numeric_limits<double>::min()});
    const double slack = rel * scale;
    return lower <= value + slack && value <= upper + slack;
}

BoundTriple check_x_of_phi(double t, double rho) {
    require_argument(t);
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("check_x_of_phi: rho must be > 0");
    const double a = evaluate(YoungSpec::phi(rho), t);
    return {std::pow(1.0 / (1.0 + rho), rho) * t, evaluate(YoungSpec::x(rho), a), t};
}

BoundTriple check_phi_of_x_tilde(double t, double rho) {
    require_argument(t);
    if (!(rho > 1.0) || !std::isfinite(rho)) throw DomainError("check_phi_of_x_tilde: rho must be > 1");
    const double xt = evaluate(YoungSpec::x_tilde(rho), t);
    return {std::pow(1.0 - 1.0 / std::exp(1.0), rho) * t, evaluate(YoungSpec::phi(rho), xt),
            t * std::pow(1.0 + rho * std::log(rho), rho)};
}

std::vector<double> spot_check_grid(double t_min, double t_max, std::size_t points) {
    if (!(t_min > 0.0) || !(t_max > t_min) || points < 2)
        throw ConfigError("spot_check_grid: need 0 < t_min < t_max and >= 2 points");
    std::vector<double> grid(points);
    const double lmin = std::log(t_min);
    const double step = (std::log(t_max) - lmin) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = std::exp(lmin + step * static_cast<double>(i));
    return grid;
}

double inverse_condition_constant(const YoungSpec& phi0, std::span<const YoungSpec> phis,
                                  std::span<const double> t_grid) {
    double worst = 0.0;
    for (double t : t_grid) {
        double num = 1.0;
        for (const auto& phi : phis) num *= invert(phi, t, 1e-13);
        const double den = invert(phi0, t, 1e-13);
        if (den > 0.0) worst = std::max(worst, num / den);
    }
    return worst;
}

ProductBound check_scalar_product_bound(const YoungSpec& phi0, std::span<const YoungSpec> phis,
                                        double kappa, std::span<const double> xs) {
    if (phis.empty()) throw ConfigError("check_scalar_product_bound: need at least one factor");
    if (phis.size() != xs.size())
        throw ConfigError("check_scalar_product_bound: one argument per factor required");
    if (!(kappa > 0.0)) throw ConfigError("check_scalar_product_bound: kappa must be > 0");

    const auto grid = spot_check_grid();
    const double needed = inverse_condition_constant(phi0, phis, grid);
    if (needed > kappa * (1.0 + 1e-9)) {
        std::ostringstream msg;
        msg << "inverse condition violated: spot-check needs kappa >= " << needed << ", got "
            << kappa;
        throw PreconditionError(msg.str());
    }

    double product = 1.0;
    double rhs = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require_argument(xs[i]);
        product *= xs[i];
        rhs += evaluate(phis[i], xs[i]);
    }
    return {evaluate(phi0, product / kappa), rhs};
}

}  // namespace czw
