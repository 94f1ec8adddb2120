"""Transmittance fluctuations of a wandering optical beam and their effect
on Gaussian entanglement sharing and coherent-state quantum key
distribution."""

from .channel import (BeamGeometry, QuadratureError, WeibullParams,
                      eta_approx, exact_eta_at_offset,
                      max_transmission_coefficient, pdt_cdf, pdt_density,
                      sample_transmittance, weibull_params)
from .fading import (FadingStats, analytic_moments, effective_channel,
                     empirical_moments, fading_excess_noise)
from .gaussian import (CovMat2, apply_fading_channel, condition_on_heterodyne,
                       condition_on_homodyne, entropy_g, log_negativity,
                       symplectic_eigs, tmsv, von_neumann_entropy)
from .ingest import (FitResult, Histogram, SeriesFormatError,
                     TransmittanceSeries, fit_geometry, histogram,
                     parse_series)
from .keyrate import (ModulationOptimum, ProtocolParams, holevo_bound,
                      key_rate, mutual_information, optimize_modulation)

__all__ = [
    "BeamGeometry", "QuadratureError", "WeibullParams", "eta_approx",
    "exact_eta_at_offset", "max_transmission_coefficient", "pdt_cdf",
    "pdt_density", "sample_transmittance", "weibull_params",
    "FadingStats", "analytic_moments", "effective_channel",
    "empirical_moments", "fading_excess_noise",
    "CovMat2", "apply_fading_channel", "condition_on_heterodyne",
    "condition_on_homodyne", "entropy_g", "log_negativity",
    "symplectic_eigs", "tmsv", "von_neumann_entropy",
    "FitResult", "Histogram", "SeriesFormatError", "TransmittanceSeries",
    "fit_geometry", "histogram", "parse_series",
    "ModulationOptimum", "ProtocolParams", "holevo_bound", "key_rate",
    "mutual_information", "optimize_modulation",
]

__version__ = "0.1.0"
