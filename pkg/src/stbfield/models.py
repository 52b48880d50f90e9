"""Correlation models: parameter types, validity regions, reparameterizations.

Three isotropic families are supported. Matern and Kummer are valid in every
dimension; the Gauss-hypergeometric (GH) family is compactly supported and
dimension-dependent, so its parameter record carries d. The GH family uses
the identifiable (nu, mu, l, a) parameterization; the canonical
(delta, beta_c, gamma_c) triple is derived.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .specialfn import DEFAULT_ACCURACY, gauss_2f1, log_tricomi_u


@dataclass(frozen=True)
class MaternParams:
    nu: float
    alpha: float

    def __post_init__(self):
        if not (self.nu > 0.0 and self.alpha > 0.0):
            raise ValueError("MaternParams needs nu > 0 and alpha > 0")


@dataclass(frozen=True)
class KummerParams:
    nu: float
    mu: float
    beta: float

    def __post_init__(self):
        if not (self.nu > 0.0 and self.mu > 0.0 and self.beta > 0.0):
            raise ValueError("KummerParams needs nu, mu, beta > 0")


@dataclass(frozen=True)
class GHParams:
    nu: float
    mu: float
    l: float
    a: float
    dim: int

    def __post_init__(self):
        if not self.nu > -0.5:
            raise ValueError("GHParams needs nu > -1/2")
        if not self.mu > 0.0:
            raise ValueError("GHParams needs mu > 0")
        if self.l < 0.0:
            raise ValueError("GHParams needs l >= 0")
        if not self.a > 0.0:
            raise ValueError("GHParams needs a > 0")
        if int(self.dim) < 1 or self.dim != int(self.dim):
            raise ValueError("GHParams needs integer dim >= 1")

    @property
    def delta(self):
        return (self.dim + 1) / 2.0 + self.nu

    @property
    def beta_c(self):
        return self.delta + self.mu / 2.0

    @property
    def gamma_c(self):
        return self.delta + self.mu / 2.0 + self.l

    @property
    def eta(self):
        return (self.beta_c + self.gamma_c - self.delta - 1.5) / 2.0


class RegionClass(enum.Enum):
    INVALID = "Invalid"
    VALID_GASPER_ONLY = "ValidGasperOnly"
    VALID_BETA_MIXTURE = "ValidBetaMixture"


@dataclass(frozen=True)
class CorrelationModel:
    params: object
    sill: float = 1.0

    def __post_init__(self):
        if not self.sill > 0.0:
            raise ValueError("sill must be positive")
        if not isinstance(self.params, (MaternParams, KummerParams, GHParams)):
            raise TypeError("unknown parameter record")
        if isinstance(self.params, GHParams) and not gh_is_valid(self.params):
            raise ValueError(
                "GH parameters fail the validity condition: "
                + _gh_violation(self.params))

    @property
    def kind(self):
        return {MaternParams: "matern", KummerParams: "kummer",
                GHParams: "gausshyper"}[type(self.params)]


def matern_corr(params, x):
    """Matern correlation 2^(1-nu)/Gamma(nu) (x/alpha)^nu K_nu(x/alpha)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("distance must be >= 0")
    scalar = x.ndim == 0
    u = np.atleast_1d(x) / params.alpha
    nu = params.nu
    out = np.ones_like(u)
    pos = u > 0.0
    if np.any(pos):
        up = u[pos]
        # K_nu via the exponentially scaled form so large x underflows cleanly
        logk = np.log(sc.kve(nu, up)) - up
        out[pos] = np.exp((1.0 - nu) * math.log(2.0) - sc.gammaln(nu)
                          + nu * np.log(up) + logk)
    out = np.minimum(out, 1.0)
    return float(out[0]) if scalar else out.reshape(x.shape)


def kummer_corr(params, x, acc=DEFAULT_ACCURACY):
    """Kummer correlation Gamma(nu+mu)/Gamma(nu) U(mu, 1-nu, x^2/(2 beta^2))."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("distance must be >= 0")
    scalar = x.ndim == 0
    xv = np.atleast_1d(x).ravel()
    nu, mu, beta = params.nu, params.mu, params.beta
    lpref = sc.gammaln(nu + mu) - sc.gammaln(nu)
    out = np.ones(xv.size)
    for i, xi in enumerate(xv):
        if xi > 0.0:
            z = xi * xi / (2.0 * beta * beta)
            out[i] = math.exp(lpref + log_tricomi_u(mu, 1.0 - nu, z, acc))
    out = np.minimum(out, 1.0)
    return float(out[0]) if scalar else out.reshape(x.shape)


def gh_corr(params, x, acc=DEFAULT_ACCURACY):
    """GH correlation; compactly supported on [0, a), exactly 0 beyond."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("distance must be >= 0")
    if not gh_is_valid(params):
        raise ValueError("invalid GH parameters: " + _gh_violation(params))
    scalar = x.ndim == 0
    xv = np.atleast_1d(x)
    nu, mu, l = params.nu, params.mu, params.l
    w = 1.0 - (xv / params.a) ** 2
    w = np.clip(w, 0.0, 1.0)
    expo = mu + l + nu - 0.5
    lpref = (sc.gammaln(nu + 0.5 + mu / 2.0) + sc.gammaln(nu + 0.5 + mu / 2.0 + l)
             - sc.gammaln(nu + mu + l + 0.5) - sc.gammaln(nu + 0.5))
    out = np.zeros_like(w)
    inside = (w > 0.0) & (w < 1.0)
    if np.any(inside):
        win = w[inside]
        hyp = gauss_2f1(mu / 2.0, mu / 2.0 + l, nu + mu + l + 0.5, win, acc)
        out[inside] = np.exp(lpref + expo * np.log(win)) * hyp
    out[w == 1.0] = 1.0  # zero lag
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out.reshape(x.shape)


def gh_is_valid(params):
    """Necessary and sufficient validity condition in dimension params.dim."""
    nu, mu, l, d = params.nu, params.mu, params.l, params.dim
    if l <= d / 2.0 + nu:
        return mu >= (d + 2.0) / 2.0 + nu - l
    return mu >= math.sqrt(2.0 * nu + l * l + d + 1.0) - l


def _gh_violation(params):
    nu, mu, l, d = params.nu, params.mu, params.l, params.dim
    if l <= d / 2.0 + nu:
        return "mu >= (d+2)/2 + nu - l = %.6g required, got mu = %.6g" % (
            (d + 2.0) / 2.0 + nu - l, mu)
    return "mu >= sqrt(2 nu + l^2 + d + 1) - l = %.6g required, got mu = %.6g" % (
        math.sqrt(2.0 * nu + l * l + d + 1.0) - l, mu)


def gh_classify_region(params):
    """Invalid / ValidGasperOnly / ValidBetaMixture for the sampler dispatch."""
    if not gh_is_valid(params):
        return RegionClass.INVALID
    nu, mu, l, d = params.nu, params.mu, params.l, params.dim
    if mu > 1.0 and mu / 2.0 - d / 2.0 - 0.5 - nu + l > 0.0:
        return RegionClass.VALID_BETA_MIXTURE
    return RegionClass.VALID_GASPER_ONLY


def kummer_matern_reparam(nu, mu, beta):
    """Kummer parameters whose correlation tends to Matern(nu, beta) as mu grows."""
    if not (nu > 0.0 and mu > 0.0 and beta > 0.0):
        raise ValueError("kummer_matern_reparam needs positive arguments")
    return KummerParams(nu, mu, beta * math.sqrt(2.0 * (mu + 1.0)))


def wendland_matern_reparam(nu, mu, beta, d):
    """GW parameters whose correlation tends to Matern(nu + 1/2, beta) as mu grows.

    Support radius a = beta * (Gamma(mu + 2 nu + 1) / Gamma(mu))^(1/(1 + 2 nu)).
    """
    if not (mu > 0.0 and beta > 0.0):
        raise ValueError("wendland_matern_reparam needs mu, beta > 0")
    a = beta * math.exp((sc.gammaln(mu + 2.0 * nu + 1.0) - sc.gammaln(mu))
                        / (1.0 + 2.0 * nu))
    params = GHParams(nu, mu, 0.5, a, d)
    if not gh_is_valid(params):
        raise ValueError("reparameterized GW parameters are invalid: "
                         + _gh_violation(params))
    return params


def model_corr(model, x, acc=DEFAULT_ACCURACY):
    """Correlation phi(x) of a CorrelationModel."""
    p = model.params
    if isinstance(p, MaternParams):
        return matern_corr(p, x)
    if isinstance(p, KummerParams):
        return kummer_corr(p, x, acc)
    return gh_corr(p, x, acc)


def theoretical_semivariogram(model, x, acc=DEFAULT_ACCURACY):
    """sill * (1 - phi(x))."""
    return model.sill * (1.0 - model_corr(model, x, acc))
