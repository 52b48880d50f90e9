"""Special-function evaluations behind the correlation models and samplers.

Real arguments, float64 results. The two nonstandard pieces are Tricomi's U
(quadrature of the Euler integral, since library implementations lose ~1e-6
relative accuracy in the parameter corner the Kummer model hits) and the
terminating 4F3 sums for the Gasper weights (exact rational arithmetic,
since the alternating recursion cancels catastrophically in float64 past
n ~ 25).
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize
from scipy import special as sc

try:
    from gmpy2 import mpq as _rational
except ImportError:
    _rational = Fraction


@dataclass(frozen=True)
class EvalAccuracy:
    rel_tol: float = 1e-12
    max_terms: int = 10000


DEFAULT_ACCURACY = EvalAccuracy()

# past this first parameter the Euler integral needs Laplace rescaling
_LAPLACE_A = 50.0
# past this parameter size scipy's hyp2f1 degrades; switch to the Euler
# integral route
_BIG_2F1_PARAM = 80.0


def log_gamma(x):
    """ln Gamma(x), x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("log_gamma requires x > 0")
    out = sc.gammaln(x)
    return float(out) if out.ndim == 0 else out


def bessel_k(order, x):
    """Modified Bessel function K_order(x), order > 0, x > 0."""
    order = float(order)
    if order <= 0.0:
        raise ValueError("bessel_k requires order > 0")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("bessel_k requires x > 0")
    out = sc.kv(order, x)
    if np.any(~np.isfinite(out)):
        # x near 0 with large order; Matern handles the x=0 limit itself
        raise OverflowError("bessel_k overflow at given (order, x)")
    return float(out) if out.ndim == 0 else out


def bessel_j(order, x):
    """Bessel function of the first kind J_order(x), order >= 0, x >= 0."""
    order = float(order)
    if order < 0.0:
        raise ValueError("bessel_j requires order >= 0")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("bessel_j requires x >= 0")
    out = sc.jv(order, x)
    return float(out) if out.ndim == 0 else out


def gauss_2f1(a, b, c, z, acc=DEFAULT_ACCURACY):
    """Gauss hypergeometric 2F1(a, b; c; z) on 0 <= z < 1."""
    a, b, c = float(a), float(b), float(c)
    if b < a:
        a, b = b, a  # symmetric in (a, b); canonical order makes that exact
    if c <= 0.0 and c == round(c):
        raise ValueError("gauss_2f1: c must not be a non-positive integer")
    z = np.asarray(z, dtype=float)
    if np.any((z < 0.0) | (z >= 1.0)):
        raise ValueError("gauss_2f1 requires 0 <= z < 1")
    if max(abs(a), abs(b), abs(c)) <= _BIG_2F1_PARAM:
        out = sc.hyp2f1(a, b, c, z)
        if np.any(~np.isfinite(out)):
            raise ArithmeticError("gauss_2f1 did not converge")
        return float(out) if out.ndim == 0 else out
    flat = np.atleast_1d(z).ravel()
    vals = np.array([_gauss_2f1_big(a, b, c, t, acc) for t in flat])
    return float(vals[0]) if z.ndim == 0 else vals.reshape(z.shape)


def _gauss_2f1_big(a, b, c, z, acc):
    # large-parameter fallback via the Euler integral
    #   2F1(a,b;c;z) = Gamma(c)/(Gamma(b) Gamma(c-b))
    #                  * int_0^1 t^{b-1} (1-t)^{c-b-1} (1-z t)^{-a} dt,
    # whose integrand is strictly positive for z < 1: no cancellation,
    # unlike the 1-z connection series, which loses digits once a^2 (1-z)
    # grows. Laplace-normalized at the interior peak before quadrature.
    if not (b > 0.0 and c - b > 0.0):
        raise ArithmeticError("gauss_2f1: large-parameter path needs c > b > 0")
    p, q = b - 1.0, c - b - 1.0

    if p > 0.0 and q > 0.0:
        # integrand vanishes at both endpoints; locate the interior peak
        def logf(t):
            t = min(max(t, 1e-300), 1.0 - 1e-16)
            return p * math.log(t) + q * math.log1p(-t) - a * math.log1p(-z * t)

        dlogf = lambda t: p / t - q / (1.0 - t) + a * z / (1.0 - z * t)
        lo, hi = 1e-12, 1.0 - 1e-12
        try:
            tstar = optimize.brentq(dlogf, lo, hi, xtol=1e-14)
        except ValueError:
            grid = np.linspace(lo, hi, 2001)
            tstar = float(grid[np.argmax([logf(t) for t in grid])])
        peak = logf(tstar)
        val, err = integrate.quad(
            lambda t: math.exp(max(logf(t) - peak, -745.0)), 0.0, 1.0,
            points=[tstar], limit=200, epsabs=0.0, epsrel=1e-11)
    else:
        # an endpoint factor is singular (exponent in (-1, 0)) or flat; hand
        # those powers to the weighted rule, normalize the smooth remainder
        wp = p if p < 0.0 else 0.0
        wq = q if q < 0.0 else 0.0
        sp, sq = p - wp, q - wq

        def logg(t):
            t = min(max(t, 1e-300), 1.0 - 1e-16)
            out = -a * math.log1p(-z * t)
            if sp > 0.0:
                out += sp * math.log(t)
            if sq > 0.0:
                out += sq * math.log1p(-t)
            return out

        edge = np.geomspace(1e-16, 0.5, 800)
        grid = np.concatenate([edge, 1.0 - edge])
        peak = max(logg(t) for t in grid)
        val, err = integrate.quad(
            lambda t: math.exp(max(logg(t) - peak, -745.0)), 0.0, 1.0,
            weight="alg", wvar=(wp, wq), limit=200, epsabs=0.0, epsrel=1e-11)
    if not (np.isfinite(val) and val > 0.0 and err <= 1e-9 * val):
        raise ArithmeticError("gauss_2f1 quadrature did not converge")
    lg = (sc.gammaln(c) - sc.gammaln(b) - sc.gammaln(c - b)
          + peak + math.log(val))
    if lg > 709.0:
        raise OverflowError("gauss_2f1 overflow at these parameters")
    return math.exp(lg)


def tricomi_u(a, b, z, acc=DEFAULT_ACCURACY):
    """Tricomi confluent U(a, b, z), a > 0, z > 0.

    Quadrature of (1/Gamma(a)) int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt,
    split at t=1 with the endpoint singularity handled by a weighted rule
    and the upper half mapped through s = 1/t.
    """
    a, b = float(a), float(b)
    if a <= 0.0:
        raise ValueError("tricomi_u requires a > 0")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise ValueError("tricomi_u requires z > 0")
    flat = np.atleast_1d(z).ravel()
    vals = np.array([math.exp(log_tricomi_u(a, b, t, acc)) for t in flat])
    return float(vals[0]) if z.ndim == 0 else vals.reshape(z.shape)


def log_tricomi_u(a, b, z, acc=DEFAULT_ACCURACY):
    """ln U(a, b, z); stable for large a where U itself under/overflows."""
    a, b, z = float(a), float(b), float(z)
    if a <= 0.0 or z <= 0.0:
        raise ValueError("log_tricomi_u requires a > 0, z > 0")
    if z >= 1e4:
        out = _log_u_asymptotic(a, b, z)
        if out is not None:
            return out
    if a > _LAPLACE_A:
        return _log_u_laplace(a, b, z)
    return _log_u_split(a, b, z)


def _log_u_asymptotic(a, b, z):
    # U ~ z^-a sum_k (a)_k (a-b+1)_k / (k! (-z)^k); alternating once terms
    # shrink, so the first omitted term bounds the error. None -> not usable.
    c = a - b + 1.0
    term = 1.0
    total = 1.0
    prev = math.inf
    for k in range(40):
        term *= -(a + k) * (c + k) / ((k + 1.0) * z)
        if term == 0.0:  # terminating case, c a non-positive integer
            break
        if abs(term) >= prev:
            return None
        total += term
        prev = abs(term)
        if prev <= 1e-15 * abs(total):
            break
    else:
        return None
    if not total > 0.0:
        return None
    return math.log(total) - a * math.log(z)


def _log_u_split(a, b, z):
    def upper(s):
        if s <= 0.0:
            return 0.0
        return math.exp(-z / s - b * math.log(s) + (b - a - 1.0) * math.log1p(s))

    i1, e1 = integrate.quad(
        lambda t: math.exp(-z * t + (b - a - 1.0) * math.log1p(t)),
        0.0, 1.0, weight="alg", wvar=(a - 1.0, 0.0),
        epsabs=0.0, epsrel=1e-11, limit=200)
    i2, e2 = integrate.quad(upper, 0.0, 1.0, epsabs=0.0, epsrel=1e-11,
                            limit=200, points=[min(1.0, z / 50.0 + 1e-12)])
    total = i1 + i2
    if total <= 0.0 or (e1 + e2) > 1e-9 * total:
        raise ArithmeticError("tricomi_u quadrature did not converge")
    return math.log(total) - sc.gammaln(a)


def _log_u_laplace(a, b, z):
    # integrate in u = ln t around the saddle; exponent of the integrand is
    # g(u) = -z e^u + a u + (b - a - 1) ln(1 + e^u)
    c1 = z + 2.0 - b
    tstar = 2.0 * (a - 1.0) / (c1 + math.sqrt(c1 * c1 + 4.0 * z * (a - 1.0)))
    ustar = math.log(tstar)

    def g(u):
        if u > 700.0:
            return -math.inf  # -z e^u dominates; exp(u) itself would overflow
        t = math.exp(u)
        return -z * t + a * u + (b - a - 1.0) * math.log1p(t)

    gmax = g(ustar)

    def f(u):
        return math.exp(g(u) - gmax)

    lo, el = integrate.quad(f, -np.inf, ustar, epsabs=0.0, epsrel=1e-11,
                            limit=200)
    hi, eh = integrate.quad(f, ustar, np.inf, epsabs=0.0, epsrel=1e-11,
                            limit=200)
    total = lo + hi
    if total <= 0.0 or (el + eh) > 1e-9 * total:
        raise ArithmeticError("tricomi_u Laplace quadrature did not converge")
    return gmax + math.log(total) - sc.gammaln(a)


def gasper_coefficient(n, delta, beta, gamma, eta):
    """Terminating 4F3(-n, n+2*eta, eta+1, delta; eta+1/2, beta, gamma; 1).

    The float64 recursion cancels catastrophically for n beyond ~25, so the
    n+1 terms are summed as exact rationals of the (exactly converted)
    float inputs; the result is then exact up to the final rounding.
    """
    n = int(n)
    if n < 0:
        raise ValueError("gasper_coefficient requires n >= 0")
    return float(_gasper_coefficient_exact(n, delta, beta, gamma, eta))


def _gasper_coefficient_exact(n, delta, beta, gamma, eta):
    dl = _rational(float(delta))
    bt = _rational(float(beta))
    gm = _rational(float(gamma))
    et = _rational(float(eta))
    half = _rational(1, 2)
    term = _rational(1)
    total = _rational(1)
    for k in range(n):
        den = (et + half + k) * (bt + k) * (gm + k) * (k + 1)
        if den == 0:
            raise ZeroDivisionError("gasper_coefficient denominator pole")
        term = term * ((k - n) * (n + 2 * et + k) * (et + 1 + k) * (dl + k)) / den
        total = total + term
    return total


def log_of_rational(q):
    """(sign, ln|q|) of an exact rational with arbitrarily long integers."""
    num, den = q.numerator, q.denominator
    if num == 0:
        return 0, float("-inf")
    sign = 1 if num > 0 else -1
    return sign, _log_int(abs(num)) - _log_int(den)


def _log_int(m):
    e = max(int(m).bit_length() - 900, 0)
    return math.log(int(m >> e)) + e * math.log(2.0) if e else math.log(int(m))
