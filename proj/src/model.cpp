#include "tweedie/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "numeric.hpp"
#include "tweedie/divergence.hpp"
#include "tweedie/errors.hpp"

namespace tweedie {

namespace {

bool is_closed_form_index(double p) {
    return p == 0.0 || p == 1.0 || p == 2.0 || p == 3.0;
}

bool is_compound_poisson(double p) { return p > 1.0 && p < 2.0; }

void check_mean(PowerIndex p, double mu) {
    if (!std::isfinite(mu) || mu <= 0.0) {
        throw DomainError("mu must be positive and finite for p = " + detail::num(p.value()) +
                          ", got " + detail::num(mu));
    }
}

}  // namespace

TweedieParams TweedieParams::make(double mu, double phi, double p) {
    const PowerIndex index(p);
    if (!index.has_model()) {
        throw DomainError("no Tweedie model exists for 0 < p < 1, got p = " + detail::num(p));
    }
    if (!std::isfinite(phi) || phi <= 0.0) {
        throw DomainError("dispersion phi must be positive and finite, got " + detail::num(phi));
    }
    if (p == 1.0 && phi != 1.0) {
        throw DomainError("Poisson model requires phi = 1, got " + detail::num(phi));
    }
    if (!std::isfinite(mu)) throw DomainError("mu must be finite, got " + detail::num(mu));
    if (p != 0.0 && mu <= 0.0) {
        throw DomainError("mu must be positive for p = " + detail::num(p) + ", got " +
                          detail::num(mu));
    }
    return TweedieParams(mu, phi, index);
}

double TweedieParams::variance() const {
    if (p_.value() == 0.0) return phi_;
    return phi_ * std::pow(mu_, p_.value());
}

std::string_view to_string(DensityMethod m) {
    switch (m) {
        case DensityMethod::ExactClosedForm: return "exact";
        case DensityMethod::Series: return "series";
        case DensityMethod::Saddlepoint: return "saddlepoint";
    }
    return "unknown";
}

std::optional<DensityMethod> parse_density_method(std::string_view name) {
    if (name == "exact") return DensityMethod::ExactClosedForm;
    if (name == "series") return DensityMethod::Series;
    if (name == "saddlepoint") return DensityMethod::Saddlepoint;
    return std::nullopt;
}

DensityMethod default_density_method(PowerIndex p) {
    if (is_closed_form_index(p.value())) return DensityMethod::ExactClosedForm;
    if (is_compound_poisson(p.value())) return DensityMethod::Series;
    return DensityMethod::Saddlepoint;
}

double variance_function(PowerIndex p, double mu) {
    check_mean(p, mu);
    return std::pow(mu, p.value());
}

double theta_of_mu(PowerIndex p, double mu) {
    check_mean(p, mu);
    return detail::powm1_over(1.0 - p.value(), std::log(mu));
}

double mu_of_theta(PowerIndex p, double theta) {
    if (!std::isfinite(theta)) throw DomainError("theta must be finite");
    const double a = 1.0 - p.value();
    if (a == 0.0) return std::exp(theta);
    const double s = a * theta;
    if (s <= -1.0) {
        throw DomainError("theta = " + detail::num(theta) +
                          " is outside the canonical domain for p = " + detail::num(p.value()));
    }
    return std::exp(std::log1p(s) / a);
}

double cumulant(PowerIndex p, double theta) {
    return cumulant_at_mu(p, mu_of_theta(p, theta));
}

double cumulant_at_mu(PowerIndex p, double mu) {
    check_mean(p, mu);
    return detail::powm1_over(2.0 - p.value(), std::log(mu));
}

double unit_deviance(PowerIndex p, double x, double mu) {
    return 2.0 * beta_divergence(p, x, mu);
}

bool in_support(PowerIndex p, double x) {
    if (!std::isfinite(x) || !p.has_model()) return false;
    const double pv = p.value();
    if (pv == 0.0) return true;
    if (pv == 1.0) return x >= 0.0 && std::floor(x) == x;
    if (is_compound_poisson(pv)) return x >= 0.0;
    return x > 0.0;
}

namespace detail {

SeriesResult compound_poisson_series(double p, double phi, double x) {
    // W = sum_{j>=1} z^j / (j! Gamma(j k)) with gamma shape k = (2-p)/(p-1)
    // and z = x^k / (phi (2-p) (phi (p-1))^k). The terms are log-concave in j
    // and peak near j = x^(2-p) / (phi (2-p)).
    const double k = (2.0 - p) / (p - 1.0);
    const double log_z = k * std::log(x) - std::log(phi * (2.0 - p)) - k * std::log(phi * (p - 1.0));
    const auto log_term = [&](double j) {
        return j * log_z - std::lgamma(j + 1.0) - std::lgamma(j * k);
    };

    const double j_peak = std::max(1.0, std::round(std::pow(x, 2.0 - p) / (phi * (2.0 - p))));
    const double log_cutoff = std::log(kSeriesRelativeCutoff);
    const double t_peak = log_term(j_peak);
    double t_max = t_peak;
    double sum = 1.0;
    int terms = 1;

    const auto add = [&](double t) {
        if (t > t_max) {
            sum = sum * std::exp(t_max - t) + 1.0;
            t_max = t;
        } else {
            sum += std::exp(t - t_max);
        }
        ++terms;
        if (terms > kSeriesMaxTerms) {
            throw SeriesNonConvergence(
                "compound Poisson series did not converge within " +
                    std::to_string(kSeriesMaxTerms) + " terms at x = " + detail::num(x),
                static_cast<std::size_t>(terms), t_max + std::log(sum));
        }
    };

    for (double j = j_peak + 1.0;; j += 1.0) {
        const double t = log_term(j);
        if (t - t_max < log_cutoff) break;
        add(t);
    }
    for (double j = j_peak - 1.0; j >= 1.0; j -= 1.0) {
        const double t = log_term(j);
        if (t - t_max < log_cutoff) break;
        add(t);
    }
    return {t_max + std::log(sum), terms};
}

}  // namespace detail

double log_base_measure(PowerIndex p, double phi, double x, DensityMethod method) {
    const double pv = p.value();
    const double log_2pi = std::log(2.0 * std::numbers::pi);
    switch (method) {
        case DensityMethod::ExactClosedForm:
            if (pv == 0.0) return -0.5 * (log_2pi + std::log(phi));
            if (pv == 1.0) return x == 0.0 ? 0.0 : x * std::log(x) - x - std::lgamma(x + 1.0);
            if (pv == 2.0) {
                const double a = 1.0 / phi;
                return -std::log(x) + a * std::log(a) - a - std::lgamma(a);
            }
            if (pv == 3.0) return -0.5 * (log_2pi + std::log(phi) + 3.0 * std::log(x));
            throw UnsupportedMethod("no closed-form density for p = " + detail::num(pv));
        case DensityMethod::Series: {
            if (!is_compound_poisson(pv)) {
                throw UnsupportedMethod("series density needs 1 < p < 2, got p = " +
                                        detail::num(pv));
            }
            if (x == 0.0) return 0.0;
            const auto series = detail::compound_poisson_series(pv, phi, x);
            // g = h exp(phi0(x) / phi) with h = W / x and phi0 the dual
            // cumulant under m = d = 0, matching the series' own convention.
            const double phi0 = std::pow(x, 2.0 - pv) / ((1.0 - pv) * (2.0 - pv));
            return series.log_w - std::log(x) + phi0 / phi;
        }
        case DensityMethod::Saddlepoint:
            if (pv == 0.0) return -0.5 * (log_2pi + std::log(phi));
            if (!(x > 0.0)) {
                throw DomainError("saddlepoint density needs x > 0, got " + detail::num(x));
            }
            return -0.5 * (log_2pi + std::log(phi) + pv * std::log(x));
    }
    throw UnsupportedMethod("unknown density method");
}

DensityEval log_density(const TweedieParams& params, double x,
                        std::optional<DensityMethod> method) {
    const PowerIndex p = params.p();
    const double pv = p.value();
    if (!in_support(p, x)) {
        throw DomainError("x = " + detail::num(x) + " is outside the support of Tw_p for p = " +
                          detail::num(pv));
    }
    const DensityMethod chosen = method.value_or(default_density_method(p));
    if (chosen == DensityMethod::ExactClosedForm && !is_closed_form_index(pv)) {
        throw UnsupportedMethod("no closed-form density for p = " + detail::num(pv));
    }
    if (chosen == DensityMethod::Series && !is_compound_poisson(pv)) {
        throw UnsupportedMethod("series density needs 1 < p < 2, got p = " + detail::num(pv));
    }

    DensityEval out;
    if (is_compound_poisson(pv) && x == 0.0) {
        // Point mass P(X = 0) = exp(-lambda), the j = 0 term of the series.
        out.log_density = -std::pow(params.mu(), 2.0 - pv) / (params.phi() * (2.0 - pv));
        out.method = DensityMethod::Series;
        out.series_terms_used = 1;
        out.warnings.emplace_back("atom");
        if (chosen == DensityMethod::Saddlepoint) {
            out.warnings.emplace_back("saddlepoint undefined at zero; exact atom returned");
        }
        return out;
    }

    out.method = chosen;
    double log_g = 0.0;
    if (chosen == DensityMethod::Series) {
        const auto series = detail::compound_poisson_series(pv, params.phi(), x);
        const double phi0 = std::pow(x, 2.0 - pv) / ((1.0 - pv) * (2.0 - pv));
        log_g = series.log_w - std::log(x) + phi0 / params.phi();
        out.series_terms_used = series.terms;
    } else {
        log_g = log_base_measure(p, params.phi(), x, chosen);
    }
    out.log_density = log_g - beta_divergence(p, x, params.mu()) / params.phi();
    return out;
}

TweedieParams scale_transform(const TweedieParams& params, double c) {
    if (!std::isfinite(c) || c <= 0.0) {
        throw DomainError("scale factor must be positive and finite, got " + detail::num(c));
    }
    const double pv = params.p().value();
    if (pv == 1.0 && c != 1.0) {
        throw DomainError("the Poisson model (phi = 1) is not closed under scaling");
    }
    return TweedieParams::make(c * params.mu(), std::pow(c, 2.0 - pv) * params.phi(), pv);
}

}  // namespace tweedie
