"""Spectral turning-bands simulation of isotropic Gaussian random fields.

Simulates mean-zero Gaussian fields with Matern, Kummer, or
Gauss-hypergeometric (incl. generalized Wendland) correlation on arbitrary
point sets in R^d.  The marginal law is exactly N(0, sill) for any number
of spectral components; the covariance is exact in expectation.
"""

from .models import (
    CorrelationModel,
    GHParams,
    KummerParams,
    MaternParams,
    RegionClass,
    gh_classify_region,
    gh_corr,
    gh_is_valid,
    kummer_corr,
    kummer_matern_reparam,
    matern_corr,
    theoretical_semivariogram,
    wendland_matern_reparam,
)
from .engine import FieldRealization, build_components, simulate, synthesize
from .samplers import RngStream

__all__ = [
    "CorrelationModel",
    "FieldRealization",
    "GHParams",
    "KummerParams",
    "MaternParams",
    "RegionClass",
    "RngStream",
    "build_components",
    "gh_classify_region",
    "gh_corr",
    "gh_is_valid",
    "kummer_corr",
    "kummer_matern_reparam",
    "matern_corr",
    "simulate",
    "synthesize",
    "theoretical_semivariogram",
    "wendland_matern_reparam",
]
