"""Plasmon-resonance shape sensitivity and reconstruction for 2D TM scattering."""

__version__ = "0.1.0"

from .errors import ConfigError, PlasmonShapeError
from .forward import IncidentWave, NearFieldData, near_field, solve_densities
from .geometry import StarlikeShape, discretize, disk, ellipse, peach, peanut, trig_series
from .inversion import InversionConfig, reconstruct
from .materials import DrudeParams, MaterialConfig, lambda_of_mu, mu_of_lambda

__all__ = [
    "ConfigError", "DrudeParams", "IncidentWave", "InversionConfig", "MaterialConfig", "NearFieldData",
    "PlasmonShapeError", "StarlikeShape", "discretize", "disk", "ellipse", "lambda_of_mu", "mu_of_lambda",
    "near_field", "peach", "peanut", "reconstruct", "solve_densities", "trig_series",
]
