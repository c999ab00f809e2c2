"""Tweedie alpha/beta divergences, densities and maximum-likelihood fits."""

from ._core import (
    DomainError,
    FitResult,
    ProfilePoint,
    SeriesNonConvergence,
    UnsupportedMethod,
    __version__,
    alpha_divergence,
    alpha_dual_index,
    beta_divergence,
    beta_divergence_dmu,
    deviance_profile,
    dual_cumulant,
    fit,
    log_density,
    model_class,
    sample,
)

__all__ = [
    "DomainError",
    "FitResult",
    "ProfilePoint",
    "SeriesNonConvergence",
    "UnsupportedMethod",
    "__version__",
    "alpha_divergence",
    "alpha_dual_index",
    "beta_divergence",
    "beta_divergence_dmu",
    "deviance_profile",
    "dual_cumulant",
    "fit",
    "log_density",
    "model_class",
    "sample",
]
