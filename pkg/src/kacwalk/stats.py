"""Small statistics helpers shared by the experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as _st

CI_LEVEL = 0.99


def z_value(level: float = CI_LEVEL) -> float:
    return float(_st.norm.ppf(0.5 + level / 2.0))


def wilson_interval(successes: int, trials: int, level: float = CI_LEVEL):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return (0.0, 1.0)
    z = z_value(level)
    p = successes / trials
    z2n = z * z / trials
    denom = 1.0 + z2n
    centre = (p + z2n / 2.0) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials)) / denom
    return (max(0.0, centre - half), min(1.0, centre + half))


def proportion_se(successes: int, trials: int) -> float:
    p = successes / trials
    return math.sqrt(p * (1.0 - p) / trials)


@dataclass
class Moments:
    """Count, sum and sum of squares; merging is plain addition."""

    count: int = 0
    total: float = 0.0
    total_sq: float = 0.0

    @classmethod
    def of(cls, values) -> "Moments":
        v = np.asarray(values, dtype=np.float64).ravel()
        return cls(int(v.size), float(v.sum()), float(v @ v))

    def merge(self, other: "Moments") -> "Moments":
        return Moments(self.count + other.count, self.total + other.total,
                       self.total_sq + other.total_sq)

    @property
    def mean(self) -> float:
        return self.total / self.count if self.count else float("nan")

    @property
    def variance(self) -> float:
        if self.count < 2:
            return float("nan")
        m = self.mean
        return max(0.0, (self.total_sq - self.count * m * m) / (self.count - 1))

    @property
    def se(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count > 1 else float("nan")

    def interval(self, level: float = CI_LEVEL):
        z = z_value(level)
        return (self.mean - z * self.se, self.mean + z * self.se)


def ks_critical_value(samples: int, alpha: float) -> float:
    """Asymptotic one-sample KS critical value at significance ``alpha``."""
    return float(_st.kstwobign.isf(alpha)) / math.sqrt(samples)


def beta_marginal(n: int):
    """Law of x[k]**2 for x uniform on S^{n-1}: Beta(1/2, (n-1)/2)."""
    return _st.beta(0.5, 0.5 * (n - 1))


def ks_distance(samples, cdf) -> float:
    return float(_st.kstest(np.asarray(samples), cdf).statistic)


def angular_histogram_tv(points, bins: int = 360) -> float:
    """TV between the binned polar-angle histogram of 2-d points and uniform.

    Binning makes this a lower bound on the true TV distance.
    """
    p = np.asarray(points, dtype=np.float64)
    ang = np.mod(np.arctan2(p[:, 1], p[:, 0]), 2.0 * math.pi)
    idx = np.minimum((ang * (bins / (2.0 * math.pi))).astype(np.int64), bins - 1)
    counts = np.bincount(idx, minlength=bins)
    return 0.5 * float(np.abs(counts / p.shape[0] - 1.0 / bins).sum())


def histogram_noise_floor(bins: int, replicas: int) -> float:
    """Documented noise floor sqrt(bins / (2 * replicas)) for the binned TV."""
    return math.sqrt(bins / (2.0 * replicas))


def loglog_slope(x, y):
    """Least-squares slope and intercept of log(y) on log(x)."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(intercept)
