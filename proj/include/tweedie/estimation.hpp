#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tweedie/model.hpp"

namespace tweedie {

/// Observations with the summary facts needed to decide which power indices
/// can describe them.
class Dataset {
public:
    /// Throws DomainError on a non-finite value.
    explicit Dataset(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t count() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double mean() const noexcept { return mean_; }
    bool has_negative() const noexcept { return has_negative_; }
    bool has_zero() const noexcept { return has_zero_; }
    bool all_integers() const noexcept { return all_integers_; }

    /// Every value is in the support of Tw_p and the sample mean is a valid
    /// mean for p (positive unless p = 0).
    bool feasible(PowerIndex p) const noexcept;

private:
    std::vector<double> values_;
    double mean_ = 0.0;
    bool has_negative_ = false;
    bool has_zero_ = false;
    bool all_integers_ = true;
};

/// argmin_mu sum_i d_beta(x_i, mu), which is the sample mean for every p.
double fit_mu(PowerIndex p, const Dataset& data);

/// Sum of log_density over the data; atoms at zero contribute log masses.
double log_likelihood(const TweedieParams& params, const Dataset& data);

struct FitOptions {
    /// Candidate range for p. Without a range the search covers
    /// [1.05, 1.95] plus the closed-form indices {0, 1, 2, 3}.
    std::optional<double> p_min;
    std::optional<double> p_max;
    double grid_step = 0.1;
    double p_tolerance = 1e-3;
    double loglik_tolerance = 1e-8;
    int max_iterations = 200;
    double phi_lower = 1e-6;
    double phi_upper = 1e6;
};

struct FitResult {
    double mu_hat = 0.0;
    double phi_hat = 0.0;
    double p_hat = 0.0;
    double log_likelihood = 0.0;
    double total_deviance = 0.0;
    /// Mean unit deviance, total_deviance / n. Reported for comparison with
    /// phi_hat only.
    double phi_mean_deviance = 0.0;
    DensityMethod method = DensityMethod::ExactClosedForm;
    int iterations = 0;
    bool converged = false;
    std::pair<double, double> p_feasible_interval{0.0, 0.0};
};

/// Profile likelihood at fixed p: mu at the sample mean, phi maximised.
struct ProfilePoint {
    double p = 0.0;
    bool feasible = false;
    double mu_hat = 0.0;
    double phi_hat = 0.0;
    double total_deviance = 0.0;
    double log_likelihood = 0.0;
    DensityMethod method = DensityMethod::ExactClosedForm;
    int iterations = 0;
    bool converged = false;
};

/// Profile at a single index. Throws DomainError if p is infeasible.
ProfilePoint profile_at(double p, const Dataset& data, const FitOptions& options = {});

/// Joint maximum-likelihood fit of (mu, phi, p). Throws DomainError when no
/// candidate index is feasible for the data.
FitResult fit(const Dataset& data, const FitOptions& options = {});

/// Profile rows for each requested p; infeasible entries have feasible=false.
std::vector<ProfilePoint> deviance_profile(const Dataset& data,
                                           std::span<const double> p_values,
                                           const FitOptions& options = {});

}  // namespace tweedie
