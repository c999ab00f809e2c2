#include "tweedie/sampling.hpp"

#include <cmath>
#include <random>

#include "numeric.hpp"
#include "tweedie/errors.hpp"

namespace tweedie {

namespace {

// Michael, Schucany & Haas (1976) transformation with one uniform rejection.
double draw_inverse_gaussian(std::mt19937_64& rng, double mu, double shape) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double nu = normal(rng);
    const double y = nu * nu;
    const double mu_y = mu * y;
    const double x = mu + mu * mu_y / (2.0 * shape) -
                     mu / (2.0 * shape) * std::sqrt(4.0 * shape * mu_y + mu_y * mu_y);
    return uniform(rng) <= mu / (mu + x) ? x : mu * mu / x;
}

}  // namespace

bool can_sample(PowerIndex p) noexcept {
    const double v = p.value();
    return v == 0.0 || v == 1.0 || v == 2.0 || v == 3.0 || (v > 1.0 && v < 2.0);
}

std::vector<double> sample(const TweedieParams& params, const SamplerConfig& cfg) {
    const PowerIndex p = params.p();
    if (!can_sample(p)) {
        throw DomainError("sampling supports p in {0, 1, 2, 3} or 1 < p < 2, got p = " +
                          detail::num(p.value()));
    }
    std::vector<double> out;
    out.reserve(cfg.n);
    std::mt19937_64 rng(cfg.seed);
    const double mu = params.mu();
    const double phi = params.phi();

    switch (p.model_class()) {
        case ModelClass::Gaussian: {
            std::normal_distribution<double> dist(mu, std::sqrt(phi));
            for (std::size_t i = 0; i < cfg.n; ++i) out.push_back(dist(rng));
            break;
        }
        case ModelClass::Poisson: {
            std::poisson_distribution<long long> dist(mu);
            for (std::size_t i = 0; i < cfg.n; ++i) out.push_back(static_cast<double>(dist(rng)));
            break;
        }
        case ModelClass::Gamma: {
            std::gamma_distribution<double> dist(1.0 / phi, mu * phi);
            for (std::size_t i = 0; i < cfg.n; ++i) out.push_back(dist(rng));
            break;
        }
        case ModelClass::InverseGaussian: {
            for (std::size_t i = 0; i < cfg.n; ++i) {
                out.push_back(draw_inverse_gaussian(rng, mu, 1.0 / phi));
            }
            break;
        }
        case ModelClass::CompoundPoisson: {
            // N ~ Poisson(lambda) summands, each gamma(k, s); the sum of N of
            // them is gamma(N k, s).
            const double pv = p.value();
            const double lambda = std::pow(mu, 2.0 - pv) / (phi * (2.0 - pv));
            const double k = (2.0 - pv) / (pv - 1.0);
            const double s = phi * (pv - 1.0) * std::pow(mu, pv - 1.0);
            std::poisson_distribution<long long> count(lambda);
            for (std::size_t i = 0; i < cfg.n; ++i) {
                const long long n = count(rng);
                if (n == 0) {
                    out.push_back(0.0);
                } else {
                    std::gamma_distribution<double> total(static_cast<double>(n) * k, s);
                    out.push_back(total(rng));
                }
            }
            break;
        }
        default:
            break;
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>>
sample_scaled_pair(const TweedieParams& params, double c, const SamplerConfig& cfg) {
    const TweedieParams scaled = scale_transform(params, c);
    std::vector<double> first = sample(params, cfg);
    for (double& v : first) v *= c;
    return {std::move(first), sample(scaled, cfg)};
}

}  // namespace tweedie
