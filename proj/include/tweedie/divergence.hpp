#pragma once

// Alpha and beta divergences generated by the Tweedie dual cumulant
//
//   phi_p(mu) = mu^(2-p) / ((1-p)(2-p)) - mu / (1-p) + 1 / (2-p)
//
// normalised so that phi(1) = phi'(1) = 0. The beta divergence is the Bregman
// divergence of phi_p and the alpha divergence its Csiszar f-divergence. All
// functions are defined for every real p, including 0 < p < 1 where no
// Tweedie distribution exists.

#include <functional>

#include "tweedie/power_index.hpp"

namespace tweedie {

/// Indices closer than this to 1 or 2 are evaluated through the
/// expm1-based forms instead of the raw power formula.
inline constexpr double kNearSingularBand = 1e-4;

/// Dual cumulant phi_p(mu). mu may be any real at p = 0, otherwise mu > 0.
double dual_cumulant(PowerIndex p, double mu);

/// d phi_p / d mu = (mu^(1-p) - 1) / (1-p), log(mu) at p = 1.
double dual_cumulant_derivative(PowerIndex p, double mu);

/// Beta divergence d_beta(x, mu). Returns +infinity for x = 0 when p >= 2.
double beta_divergence(PowerIndex p, double x, double mu);

/// Alpha divergence d_alpha(x, mu) = mu * phi_p(x / mu). Requires mu > 0.
double alpha_divergence(PowerIndex p, double x, double mu);

/// Partial derivative of d_beta(x, mu) with respect to mu: -(x - mu) / mu^p.
double beta_divergence_dmu(PowerIndex p, double x, double mu);

/// mu^(1-p) * d_alpha(x, mu); agrees with beta_divergence.
double beta_from_alpha(PowerIndex p, double x, double mu);

/// Index p2 with d_alpha,p(x, mu) = d_alpha,p2(mu, x).
constexpr double alpha_dual_index(double p) noexcept { return 3.0 - p; }

/// Index q = 2 - p of the (q(q-1))^-1 parameterisation of alpha/beta.
constexpr double q_convention(double p) noexcept { return 2.0 - p; }
constexpr double p_from_q_convention(double q) noexcept { return 2.0 - q; }

/// Convex scalar function with its first derivative. `in_domain` may be left
/// empty when the generator is defined on all reals. Values are long double so
/// that the generic Bregman form keeps its cancellation below double epsilon.
struct ConvexGenerator {
    std::function<long double(long double)> value;
    std::function<long double(long double)> derivative;
    std::function<bool(long double)> in_domain;

    bool contains(long double t) const { return !in_domain || in_domain(t); }
};

/// phi_p packaged as a generator, with phi_p(0) included where it is finite.
ConvexGenerator dual_cumulant_generator(PowerIndex p);

/// f*(u) = u f(1/u). Swaps the arguments of the induced f-divergence.
ConvexGenerator csiszar_dual(ConvexGenerator f);

/// phi(x) - phi(mu) - (x - mu) phi'(mu).
double bregman(const ConvexGenerator& phi, double x, double mu);

/// mu * f(x / mu), for f convex with f(1) = 0 and mu > 0.
double f_divergence(const ConvexGenerator& f, double x, double mu);

}  // namespace tweedie
