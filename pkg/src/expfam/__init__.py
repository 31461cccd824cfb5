"""Closed-form MAP estimators for generator-defined exponential families."""

__version__ = "0.1.0"

from .estimators import Estimate, estimate_general, estimate_power  # noqa: E402
from .fitting import fit, fit_closed_form  # noqa: E402
from .generators import (  # noqa: E402
    REGISTRY,
    fit_spec,
    generator_for,
    power_generator,
    registry_lookup,
    spec_from_canonical,
)
from .sampling import RngStream, sample_family  # noqa: E402
from .statistics import HyperParams, SampleStats, compute_stats  # noqa: E402

__all__ = [
    "__version__",
    "Estimate",
    "HyperParams",
    "REGISTRY",
    "RngStream",
    "SampleStats",
    "compute_stats",
    "estimate_general",
    "estimate_power",
    "fit",
    "fit_closed_form",
    "fit_spec",
    "generator_for",
    "power_generator",
    "registry_lookup",
    "sample_family",
    "spec_from_canonical",
]
