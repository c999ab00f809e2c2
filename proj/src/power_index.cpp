#include "tweedie/power_index.hpp"

#include <cmath>

#include "numeric.hpp"
#include "tweedie/errors.hpp"

namespace tweedie {

std::string_view to_string(ModelClass c) {
    switch (c) {
        case ModelClass::Gaussian: return "Gaussian";
        case ModelClass::Poisson: return "Poisson";
        case ModelClass::CompoundPoisson: return "CompoundPoisson";
        case ModelClass::Gamma: return "Gamma";
        case ModelClass::InverseGaussian: return "InverseGaussian";
        case ModelClass::OtherValid: return "OtherValid";
        case ModelClass::NoModel: return "NoModel";
    }
    return "Unknown";
}

PowerIndex::PowerIndex(double p) : p_(p), class_(classify(p)) {
    if (!std::isfinite(p)) {
        throw DomainError("power index must be finite, got " + detail::num(p));
    }
}

ModelClass PowerIndex::classify(double p) noexcept {
    if (p == 0.0) return ModelClass::Gaussian;
    if (p == 1.0) return ModelClass::Poisson;
    if (p == 2.0) return ModelClass::Gamma;
    if (p == 3.0) return ModelClass::InverseGaussian;
    if (p > 0.0 && p < 1.0) return ModelClass::NoModel;
    if (p > 1.0 && p < 2.0) return ModelClass::CompoundPoisson;
    return ModelClass::OtherValid;
}

}  // namespace tweedie
