#pragma once

#include <string_view>

namespace tweedie {

enum class ModelClass {
    Gaussian,         // p = 0
    Poisson,          // p = 1
    CompoundPoisson,  // 1 < p < 2
    Gamma,            // p = 2
    InverseGaussian,  // p = 3
    OtherValid,       // p < 0, 2 < p < 3, p > 3
    NoModel,          // 0 < p < 1
};

std::string_view to_string(ModelClass c);

/// Power index p of the variance function v(mu) = mu^p, tagged with the
/// Tweedie model class it selects. Any finite real is a valid index for the
/// divergences; only NoModel indices are rejected by the statistical code.
class PowerIndex {
public:
    /// Throws DomainError if p is not finite.
    explicit PowerIndex(double p);

    static ModelClass classify(double p) noexcept;

    double value() const noexcept { return p_; }
    ModelClass model_class() const noexcept { return class_; }
    bool has_model() const noexcept { return class_ != ModelClass::NoModel; }

    friend bool operator==(const PowerIndex&, const PowerIndex&) = default;

private:
    double p_;
    ModelClass class_;
};

}  // namespace tweedie
