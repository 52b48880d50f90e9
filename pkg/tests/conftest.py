"""Shared statistical helpers for the test suite.

Critical values are frozen constants: KS from the asymptotic
Kolmogorov distribution, chi-square from scipy, Anderson-Darling from
the Monte Carlo oracle in scripts/oracle_ad_critical.py.
"""

import math

import numpy as np
import scipy.stats

# asymptotic Kolmogorov critical coefficient at p = 0.001:
# sqrt(-ln(0.0005)/2) = 1.94947
KS_COEF_P001 = math.sqrt(-0.5 * math.log(0.0005))

# fully-specified-null A^2 0.999 quantile; scripts/oracle_ad_critical.py
# measured 5.93 with 3SE bracket [5.83, 6.09] at n=1000 (asymptotic
# tabulations give 6.000)
AD_CRIT_P001 = 6.0


def ad_stat(samples, cdf):
    """Anderson-Darling A^2 against a fully specified CDF."""
    u = np.asarray(cdf(np.sort(np.asarray(samples, dtype=float))))
    u = np.clip(u, 1e-300, 1.0 - 1e-16)
    n = len(u)
    i = np.arange(1, n + 1)
    return float(-n - np.mean((2 * i - 1) * (np.log(u)
                                             + np.log1p(-u[::-1]))))


def ks_stat(samples, cdf):
    """Two-sided one-sample KS statistic against a callable CDF."""
    x = np.sort(np.asarray(samples, dtype=float))
    f = np.asarray(cdf(x))
    n = len(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_crit(n):
    return KS_COEF_P001 / math.sqrt(n)


def two_sample_ks(a, b):
    """(statistic, critical value at p = 0.001)."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    allv = np.concatenate([a, b])
    ca = np.searchsorted(a, allv, side="right") / len(a)
    cb = np.searchsorted(b, allv, side="right") / len(b)
    stat = float(np.max(np.abs(ca - cb)))
    crit = KS_COEF_P001 * math.sqrt((len(a) + len(b)) / (len(a) * len(b)))
    return stat, crit


def chi2_uniformity(counts, probs=None):
    """(statistic, critical value at p = 0.001) for binned counts."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if probs is None:
        expected = np.full(len(counts), total / len(counts))
    else:
        expected = total * np.asarray(probs, dtype=float)
    stat = float(np.sum((counts - expected) ** 2 / expected))
    crit = float(scipy.stats.chi2.ppf(0.999, len(counts) - 1))
    return stat, crit


def angle_bin_counts(directions, bins=36):
    """Counts of planar angles in equal bins; directions (n, 2)."""
    ang = np.arctan2(directions[:, 1], directions[:, 0])
    idx = np.floor((ang + np.pi) / (2 * np.pi) * bins).astype(int)
    idx = np.clip(idx, 0, bins - 1)
    return np.bincount(idx, minlength=bins)
