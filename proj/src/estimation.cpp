#include "tweedie/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>

#include <boost/math/tools/minima.hpp>

#include "numeric.hpp"
#include "tweedie/divergence.hpp"
#include "tweedie/errors.hpp"

namespace tweedie {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Ranges of p over which the profile likelihood is continuous. Exact
// densities at 0, 2 and 3 are limits of the neighbouring method, except that
// p = 2 is continuous only from the compound-Poisson side.
enum class Segment { NonPositive, Poisson, CompoundPoisson, AboveTwo };

Segment segment_of(double p) {
    if (p <= 0.0) return Segment::NonPositive;
    if (p == 1.0) return Segment::Poisson;
    if (p <= 2.0) return Segment::CompoundPoisson;
    return Segment::AboveTwo;
}

double snap(double v) { return std::round(v * 1e12) / 1e12; }

std::vector<double> candidate_indices(const FitOptions& options) {
    std::vector<double> grid;
    const double specials[] = {0.0, 1.0, 2.0, 3.0};
    double lo = 1.05;
    double hi = 1.95;
    const bool ranged = options.p_min.has_value() || options.p_max.has_value();
    if (ranged) {
        lo = options.p_min.value_or(0.0);
        hi = options.p_max.value_or(3.0);
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
            throw DomainError("invalid p range [" + detail::num(lo) + ", " + detail::num(hi) + "]");
        }
    }
    if (!(options.grid_step > 0.0)) {
        throw DomainError("grid step must be positive, got " + detail::num(options.grid_step));
    }
    for (int i = 0;; ++i) {
        const double p = snap(lo + i * options.grid_step);
        if (p > hi + 1e-12) break;
        grid.push_back(p);
    }
    if (ranged) grid.push_back(hi);
    for (double s : specials) {
        if (!ranged || (s >= lo && s <= hi)) grid.push_back(s);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

bool in_divergence_domain(const Dataset& data, double p) {
    if (p == 0.0) return true;
    if (data.has_negative() || !(data.mean() > 0.0)) return false;
    return p < 2.0 || !data.has_zero();
}

double total_deviance(PowerIndex p, const Dataset& data, double mu) {
    double total = 0.0;
    for (double x : data.values()) total += 2.0 * beta_divergence(p, x, mu);
    return total;
}

int bits_for_tolerance(double tol, double scale) {
    const double rel = tol / (2.0 * std::max(1.0, scale));
    return std::clamp(static_cast<int>(std::ceil(1.0 - std::log2(rel))), 4,
                      std::numeric_limits<double>::digits / 2);
}

}  // namespace

Dataset::Dataset(std::vector<double> values) : values_(std::move(values)) {
    double sum = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("dataset values must be finite");
        sum += v;
        has_negative_ = has_negative_ || v < 0.0;
        has_zero_ = has_zero_ || v == 0.0;
        all_integers_ = all_integers_ && std::floor(v) == v;
    }
    mean_ = values_.empty() ? kNaN : sum / static_cast<double>(values_.size());
}

bool Dataset::feasible(PowerIndex p) const noexcept {
    if (values_.empty() || !p.has_model()) return false;
    const double pv = p.value();
    if (pv == 0.0) return true;
    if (has_negative_ || !(mean_ > 0.0)) return false;
    if (pv == 1.0) return all_integers_;
    if (pv > 1.0 && pv < 2.0) return true;
    return !has_zero_;
}

double fit_mu(PowerIndex p, const Dataset& data) {
    if (data.empty()) throw DomainError("cannot fit the mean of an empty dataset");
    if (!in_divergence_domain(data, p.value())) {
        throw DomainError("data outside the beta divergence domain for p = " +
                          detail::num(p.value()));
    }
    const double mu = data.mean();
    // Stationarity of sum_i d_beta(x_i, mu): sum_i -(x_i - mu) / mu^p = 0.
    double gradient = 0.0;
    double scale = 0.0;
    for (double x : data.values()) {
        const double g = beta_divergence_dmu(p, x, mu);
        gradient += g;
        scale += std::fabs(g);
    }
    if (std::fabs(gradient) > 1e-9 * std::max(scale, 1e-300)) {
        throw std::logic_error("beta divergence gradient does not vanish at the sample mean");
    }
    return mu;
}

double log_likelihood(const TweedieParams& params, const Dataset& data) {
    double total = 0.0;
    for (double x : data.values()) total += log_density(params, x).log_density;
    return total;
}

ProfilePoint profile_at(double p, const Dataset& data, const FitOptions& options) {
    const PowerIndex index(p);
    if (!data.feasible(index)) {
        throw DomainError("p = " + detail::num(p) + " is infeasible for the data");
    }
    ProfilePoint out;
    out.p = p;
    out.feasible = true;
    out.mu_hat = fit_mu(index, data);
    out.method = default_density_method(index);
    out.total_deviance = total_deviance(index, data, out.mu_hat);

    if (p == 1.0) {
        out.phi_hat = 1.0;
        out.log_likelihood = log_likelihood(TweedieParams::make(out.mu_hat, 1.0, p), data);
        out.converged = true;
        return out;
    }

    const auto negative_loglik = [&](double log_phi) {
        try {
            return -log_likelihood(TweedieParams::make(out.mu_hat, std::exp(log_phi), p), data);
        } catch (const SeriesNonConvergence&) {
            return std::numeric_limits<double>::max();
        }
    };
    const double lo = std::log(options.phi_lower);
    const double hi = std::log(options.phi_upper);
    std::uintmax_t iterations = static_cast<std::uintmax_t>(options.max_iterations);
    const auto [log_phi, value] = boost::math::tools::brent_find_minima(
        negative_loglik, lo, hi, std::numeric_limits<double>::digits / 2, iterations);

    out.phi_hat = std::exp(log_phi);
    out.log_likelihood = -value;
    out.iterations = static_cast<int>(iterations);
    const double edge = 1e-3 * (hi - lo);
    out.converged = out.iterations < options.max_iterations && log_phi - lo > edge &&
                    hi - log_phi > edge && std::isfinite(out.log_likelihood);
    return out;
}

std::vector<ProfilePoint> deviance_profile(const Dataset& data, std::span<const double> p_values,
                                           const FitOptions& options) {
    std::vector<ProfilePoint> rows;
    rows.reserve(p_values.size());
    for (double p : p_values) {
        if (!std::isfinite(p) || !data.feasible(PowerIndex(p))) {
            ProfilePoint row;
            row.p = p;
            row.mu_hat = row.phi_hat = row.total_deviance = row.log_likelihood = kNaN;
            rows.push_back(row);
            continue;
        }
        rows.push_back(profile_at(p, data, options));
    }
    return rows;
}

FitResult fit(const Dataset& data, const FitOptions& options) {
    if (data.empty()) throw DomainError("cannot fit an empty dataset");

    std::vector<double> candidates;
    for (double p : candidate_indices(options)) {
        if (data.feasible(PowerIndex(p))) candidates.push_back(p);
    }
    if (candidates.empty()) throw DomainError("no feasible power index for the data");

    std::map<double, ProfilePoint> evaluated;
    const auto profile = [&](double p) -> const ProfilePoint& {
        auto it = evaluated.find(p);
        if (it == evaluated.end()) it = evaluated.emplace(p, profile_at(p, data, options)).first;
        return it->second;
    };
    for (double p : candidates) profile(p);

    int iterations = static_cast<int>(candidates.size());
    bool outer_converged = true;
    const ProfilePoint* best = nullptr;

    // Candidates are sorted, so segments come in increasing p and the strict
    // comparison below keeps the lower index on ties.
    for (auto first = candidates.begin(); first != candidates.end();) {
        const Segment seg = segment_of(*first);
        const auto last = std::find_if(first, candidates.end(),
                                       [&](double p) { return segment_of(p) != seg; });

        auto top = std::max_element(first, last, [&](double a, double b) {
            return profile(a).log_likelihood < profile(b).log_likelihood;
        });
        const ProfilePoint* seg_best = &profile(*top);

        const double lo = top == first ? *top : *(top - 1);
        const double hi = (top + 1) == last ? *top : *(top + 1);
        if (seg != Segment::Poisson && hi > lo) {
            std::uintmax_t outer_iters = static_cast<std::uintmax_t>(options.max_iterations);
            const auto [p_ref, neg_ll] = boost::math::tools::brent_find_minima(
                [&](double p) { return -profile(p).log_likelihood; }, lo, hi,
                bits_for_tolerance(options.p_tolerance, std::max(std::fabs(lo), std::fabs(hi))),
                outer_iters);
            iterations += static_cast<int>(outer_iters);
            outer_converged = outer_converged && outer_iters < static_cast<std::uintmax_t>(options.max_iterations);
            if (-neg_ll > seg_best->log_likelihood) seg_best = &profile(p_ref);
        }

        const double tol = options.loglik_tolerance * std::max(1.0, std::fabs(seg_best->log_likelihood));
        if (best == nullptr || seg_best->log_likelihood > best->log_likelihood + tol) best = seg_best;
        first = last;
    }

    FitResult result;
    result.p_hat = best->p;
    result.mu_hat = best->mu_hat;
    result.phi_hat = best->phi_hat;
    result.log_likelihood = best->log_likelihood;
    result.total_deviance = best->total_deviance;
    result.phi_mean_deviance = best->total_deviance / static_cast<double>(data.count());
    result.method = best->method;
    result.iterations = iterations;
    result.converged = outer_converged && best->converged;
    result.p_feasible_interval = {candidates.front(), candidates.back()};
    return result;
}

}  // namespace tweedie
