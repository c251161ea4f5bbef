#pragma once

#include <string>

#include "czw/config.hpp"
#include "czw/report.hpp"

namespace czw {

/// ||T_b f||_{L^p(w)} against
/// (p')^{k+1} p^{1+1/s} ((p-1)/delta)^{1/p'} ||b|| ||f||_{L^p(M_{Phi_rho} w)},
/// rho = (1 + 1/s) p - 1 + delta, for every (p, delta).
VerificationReport verify_strong(const ExperimentConfig& cfg);

/// w({|T_b f| > lambda}) against eps^{-(k+1)} * sum Phi_{1/s}(||b|| |f| / lambda) M_{Phi_{1/s+eps}} w h
/// for every (lambda, eps), with a slope fit over eps at each lambda.
VerificationReport verify_endpoint(const ExperimentConfig& cfg);

/// One symbol with s = 1: the weak-type bound with the weight entering through
/// [w]_{A_inf}(1 + log+ [w]_{A_inf})^2 (variant 1) or Phi_1([w]_{A_1})^2
/// (variant 2), both against sum Phi_1(||b||_BMO |f| / lambda) M w h.
VerificationReport verify_corollary(const ExperimentConfig& cfg);

/// ||M_{Phi_{1/s}} f / v||_{L^{p'}(v)} against
/// p^{1+1/s} ((p-1)/delta)^{1/p'} ||f / w||_{L^{p'}(w)}, v = M_{Phi_rho} w.
VerificationReport verify_two_weight(const ExperimentConfig& cfg);

/// Pointwise sup over cells of M^#_delta(T_b f) against
/// ||b|| M_{Phi_{1/s}} f + sum over nonempty sigma of ||sigma|| M_eps(T_{sigma'} f)
/// (M f when there are no symbols), for every delta < eps.
VerificationReport verify_sharp_pointwise(const ExperimentConfig& cfg);

/// Sharp-function and weak-type checks for the maximal operators:
///   sharp_lp:          ||f||_{L^p(w)}       vs p [w]_{A_inf} ||M^{#,d}_delta f||_{L^p(w)}
///   maximal_sharp_lp:  ||M^d_eps f||_{L^p(w)} vs p [w]_{A_inf} ||M^{#,d}_eps f||_{L^p(w)}
///   sharp_hilbert:     sup_x M^#_delta(H f)(x) / M f(x)
///   fefferman_stein:   ||M f||_{L^{1,inf}(w)} vs sum |f| M w h
VerificationReport verify_maximal_lemmas(const ExperimentConfig& cfg);

/// Dispatches on cfg.theorem.
VerificationReport verify(const ExperimentConfig& cfg);

/// Runs cfg's theorem once per value on `axis` ("epsilon", "delta", "p" or
/// "resolution"), each run restricted to that single value.
VerificationReport sweep(const ExperimentConfig& cfg, const std::string& axis);

/// Throws PreconditionError unless f vanishes within a quarter of the domain
/// length of either end.
void require_margin(const GridFunction& f);

}  // namespace czw
