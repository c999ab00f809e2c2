#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "tweedie/model.hpp"

namespace tweedie {

/// Draws are produced by std::mt19937_64 seeded with `seed`. Output is
/// reproducible for a fixed (seed, params, n) on a given standard library.
struct SamplerConfig {
    std::uint64_t seed = 0;
    std::size_t n = 0;
};

/// Whether sample() supports this index: p in {0, 1, 2, 3} or 1 < p < 2.
bool can_sample(PowerIndex p) noexcept;

/// n independent draws from Tw_p(mu, phi).
///   p = 0       normal(mu, sqrt(phi))
///   p = 1       Poisson(mu)
///   1 < p < 2   Poisson(lambda) sum of gamma(k, s) variables
///   p = 2       gamma with shape 1/phi and mean mu
///   p = 3       inverse Gaussian(mu, 1/phi), Michael-Schucany-Haas
std::vector<double> sample(const TweedieParams& params, const SamplerConfig& cfg);

/// (c * sample(params), sample(scale_transform(params, c))) with the same
/// configuration for both. The two vectors are equal in distribution.
std::pair<std::vector<double>, std::vector<double>>
sample_scaled_pair(const TweedieParams& params, double c, const SamplerConfig& cfg);

}  // namespace tweedie
