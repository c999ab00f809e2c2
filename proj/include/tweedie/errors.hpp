#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tweedie {

/// Argument outside the domain of a divergence, density or sampler.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested density method cannot be used for the given power index.
class UnsupportedMethod : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Compound-Poisson series did not reach its truncation criterion within the
/// term budget. Carries what had been accumulated when evaluation stopped.
class SeriesNonConvergence : public std::runtime_error {
public:
    SeriesNonConvergence(const std::string& what, std::size_t terms_used,
                         double partial_log_sum)
        : std::runtime_error(what), terms_used_(terms_used),
          partial_log_sum_(partial_log_sum) {}

    std::size_t terms_used() const noexcept { return terms_used_; }
    double partial_log_sum() const noexcept { return partial_log_sum_; }

private:
    std::size_t terms_used_;
    double partial_log_sum_;
};

}  // namespace tweedie
