#include "tweedie/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "numeric.hpp"
#include "tweedie/errors.hpp"

namespace tweedie {

namespace {

// phi_p(e^t) = sum_{k>=2} t^k / k! * (b^(k-1) - 1) / a, a = 1 - p, b = 2 - p.
// Used near r = 1, where the closed forms cancel down to O((r - 1)^2).
template <class T>
T dual_cumulant_series(T p, T t) {
    const T a = 1 - p;
    const T b = 2 - p;
    const T log_b = b > 0 ? std::log1p(a) : T(0);
    T sum = 0;
    T power = t;
    for (int k = 2; k < 80; ++k) {
        power *= t / k;
        T coeff;
        T bound;
        if (a == 0) {
            coeff = bound = T(k - 1);
        } else if (b > 0) {
            coeff = bound = std::expm1(T(k - 1) * log_b) / a;
        } else {
            // Coefficients can vanish here (every odd k at p = 3).
            const T bk = std::pow(b, T(k - 1));
            coeff = (bk - 1) / a;
            bound = (std::fabs(bk) + 1) / std::fabs(a);
        }
        sum += power * coeff;
        if (std::fabs(power * bound) <= std::numeric_limits<T>::epsilon() * std::fabs(sum)) break;
    }
    return sum;
}

// phi_p(r) without argument checks. r >= 0, or any real at p = 0.
template <class T>
T dual_cumulant_raw(T p, T r) {
    if (p == 0) return (r - 1) * (r - 1) / 2;
    if (r == 0) return p < 2 ? 1 / (2 - p) : std::numeric_limits<T>::infinity();
    const T a = 1 - p;
    const T b = 2 - p;
    const T log_r = std::log(r);
    if (std::fabs(log_r) * std::max(T(1), std::fabs(b)) < T(0.25)) {
        return dual_cumulant_series(p, log_r);
    }
    if (p == 1) return r * log_r - r + 1;
    if (p == 2) return r - 1 - log_r;
    if (detail::near(static_cast<double>(p), 1.0, kNearSingularBand)) {
        // (r (r^a - 1)/a - (r - 1)) / b
        return (r * detail::powm1_over(a, log_r) - (r - 1)) / b;
    }
    if (detail::near(static_cast<double>(p), 2.0, kNearSingularBand)) {
        // ((r^b - 1)/b - (r - 1)) / a
        return (detail::powm1_over(b, log_r) - (r - 1)) / a;
    }
    return std::pow(r, b) / (a * b) - r / a + 1 / b;
}

template <class T>
T dual_cumulant_derivative_raw(T p, T r) {
    if (p == 0) return r - 1;
    return detail::powm1_over(T(1) - p, std::log(r));
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be finite, got " + detail::num(v));
    }
}

// Shared (x, mu) domain of the divergences: x real at p = 0, else x >= 0.
void check_x(const PowerIndex& p, double x) {
    require_finite(x, "x");
    if (p.value() != 0.0 && x < 0.0) {
        throw DomainError("x must be non-negative for p = " + detail::num(p.value()) +
                          ", got " + detail::num(x));
    }
}

void check_positive_mu(double mu) {
    require_finite(mu, "mu");
    if (mu <= 0.0) throw DomainError("mu must be positive, got " + detail::num(mu));
}

double clamp_nonnegative(double d) { return d < 0.0 ? 0.0 : d; }

}  // namespace

double dual_cumulant(PowerIndex p, double mu) {
    require_finite(mu, "mu");
    if (p.value() != 0.0 && mu <= 0.0) {
        throw DomainError("mu must be positive for p = " + detail::num(p.value()) +
                          ", got " + detail::num(mu));
    }
    return dual_cumulant_raw(p.value(), mu);
}

double dual_cumulant_derivative(PowerIndex p, double mu) {
    require_finite(mu, "mu");
    if (p.value() != 0.0 && mu <= 0.0) {
        throw DomainError("mu must be positive for p = " + detail::num(p.value()) +
                          ", got " + detail::num(mu));
    }
    return dual_cumulant_derivative_raw(p.value(), mu);
}

double beta_divergence(PowerIndex p, double x, double mu) {
    check_x(p, x);
    const double pv = p.value();
    if (pv == 0.0) {
        require_finite(mu, "mu");
        return 0.5 * (x - mu) * (x - mu);
    }
    check_positive_mu(mu);
    if (x == mu) return 0.0;
    if (pv == 1.0 && x == 0.0) return mu;
    // d_beta(x, mu) = mu^(2-p) phi(x / mu) by homogeneity of the generator.
    return clamp_nonnegative(std::pow(mu, 2.0 - pv) * dual_cumulant_raw(pv, x / mu));
}

double alpha_divergence(PowerIndex p, double x, double mu) {
    check_x(p, x);
    check_positive_mu(mu);
    if (x == mu) return 0.0;
    return clamp_nonnegative(mu * dual_cumulant_raw(p.value(), x / mu));
}

double beta_divergence_dmu(PowerIndex p, double x, double mu) {
    check_x(p, x);
    if (p.value() == 0.0) {
        require_finite(mu, "mu");
        return mu - x;
    }
    check_positive_mu(mu);
    return (mu - x) * std::pow(mu, -p.value());
}

double beta_from_alpha(PowerIndex p, double x, double mu) {
    const double d = alpha_divergence(p, x, mu);
    return std::pow(mu, 1.0 - p.value()) * d;
}

ConvexGenerator dual_cumulant_generator(PowerIndex p) {
    const long double pv = p.value();
    ConvexGenerator g;
    g.value = [pv](long double t) { return dual_cumulant_raw(pv, t); };
    g.derivative = [pv](long double t) { return dual_cumulant_derivative_raw(pv, t); };
    if (pv != 0) {
        g.in_domain = [pv](long double t) {
            return std::isfinite(t) && (t > 0 || (t == 0 && pv < 2));
        };
    }
    return g;
}

ConvexGenerator csiszar_dual(ConvexGenerator f) {
    ConvexGenerator g;
    g.value = [f](long double u) { return u * f.value(1 / u); };
    g.derivative = [f](long double u) { return f.value(1 / u) - f.derivative(1 / u) / u; };
    g.in_domain = [f](long double u) { return u > 0 && f.contains(1 / u); };
    return g;
}

double bregman(const ConvexGenerator& phi, double x, double mu) {
    if (!phi.contains(x) || !phi.contains(mu)) {
        throw DomainError("Bregman divergence evaluated outside the generator domain at (" +
                          detail::num(x) + ", " + detail::num(mu) + ")");
    }
    const long double xl = x;
    const long double ml = mu;
    const long double d = phi.value(xl) - phi.value(ml) - (xl - ml) * phi.derivative(ml);
    if (std::isnan(d)) throw DomainError("Bregman divergence is undefined here");
    return static_cast<double>(d);
}

double f_divergence(const ConvexGenerator& f, double x, double mu) {
    require_finite(mu, "mu");
    if (mu <= 0.0) throw DomainError("f-divergence needs mu > 0, got " + detail::num(mu));
    const long double t = static_cast<long double>(x) / mu;
    if (!f.contains(t)) {
        throw DomainError("f-divergence evaluated outside the generator domain at x/mu = " +
                          detail::num(static_cast<double>(t)));
    }
    const double d = static_cast<double>(mu * f.value(t));
    if (std::isnan(d)) throw DomainError("f-divergence is undefined here");
    return d;
}

}  // namespace tweedie
