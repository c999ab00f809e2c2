#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tweedie/power_index.hpp"

namespace tweedie {

/// Tw_p(mu, phi): mean mu, dispersion phi, variance phi * mu^p.
///
/// Construct through make(), which enforces
///   - p has a model (not 0 < p < 1),
///   - phi > 0, and phi == 1 when p == 1 (no quasi-Poisson),
///   - mu > 0, except at p = 0 where any finite mean is allowed.
class TweedieParams {
public:
    static TweedieParams make(double mu, double phi, double p);

    double mu() const noexcept { return mu_; }
    double phi() const noexcept { return phi_; }
    PowerIndex p() const noexcept { return p_; }

    double variance() const;

    friend bool operator==(const TweedieParams&, const TweedieParams&) = default;

private:
    TweedieParams(double mu, double phi, PowerIndex p) : mu_(mu), phi_(phi), p_(p) {}

    double mu_;
    double phi_;
    PowerIndex p_;
};

enum class DensityMethod { ExactClosedForm, Series, Saddlepoint };

std::string_view to_string(DensityMethod m);
std::optional<DensityMethod> parse_density_method(std::string_view name);

/// Method chosen when the caller does not override it: exact closed form at
/// p in {0, 1, 2, 3}, series for 1 < p < 2, saddlepoint otherwise.
DensityMethod default_density_method(PowerIndex p);

struct DensityEval {
    double log_density = 0.0;
    DensityMethod method = DensityMethod::ExactClosedForm;
    int series_terms_used = 0;
    std::vector<std::string> warnings;
};

/// Variance function v(mu) = mu^p.
double variance_function(PowerIndex p, double mu);

/// Canonical parameter theta(mu) = (mu^(1-p) - 1) / (1-p); log(mu) at p = 1.
double theta_of_mu(PowerIndex p, double mu);

/// Inverse of theta_of_mu. Requires 1 + (1-p) theta > 0.
double mu_of_theta(PowerIndex p, double theta);

/// Cumulant psi(theta) under the normalised constants, psi(0) = 0.
double cumulant(PowerIndex p, double theta);

/// psi(theta(mu)) = (mu^(2-p) - 1) / (2-p); log(mu) at p = 2.
double cumulant_at_mu(PowerIndex p, double mu);

/// Unit deviance 2 * d_beta(x, mu).
double unit_deviance(PowerIndex p, double x, double mu);

/// Whether x lies in the support of Tw_p: all reals at p = 0, non-negative
/// integers at p = 1, x >= 0 for 1 < p < 2, x > 0 otherwise.
bool in_support(PowerIndex p, double x);

/// Log-density in beta-divergence form, log g(x, phi) - d_beta(x, mu) / phi.
/// At x = 0 with 1 < p < 2 the result is the log of the point mass at zero.
DensityEval log_density(const TweedieParams& params, double x,
                        std::optional<DensityMethod> method = std::nullopt);

/// log g(x, phi) for the given method; x must be in the support and
/// positive unless p <= 1.
double log_base_measure(PowerIndex p, double phi, double x, DensityMethod method);

/// Tw_p(c mu, c^(2-p) phi), the law of c X for X ~ Tw_p(mu, phi).
TweedieParams scale_transform(const TweedieParams& params, double c);

namespace detail {

struct SeriesResult {
    double log_w;  // log of sum_j z^j / (j! Gamma(j k))
    int terms;
};

/// Compound-Poisson series W(x, phi, p) for 1 < p < 2 and x > 0, summed in log
/// space outward from the dominant index.
SeriesResult compound_poisson_series(double p, double phi, double x);

inline constexpr double kSeriesRelativeCutoff = 1e-17;
inline constexpr int kSeriesMaxTerms = 100000;

}  // namespace detail

}  // namespace tweedie
