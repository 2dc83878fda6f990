"""
Laws of total counts |Xi| and total variation between them.

Comparing count laws realizes the dtv pseudometric exactly, since dtv only
looks at the law of the total mass.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import stats

from .exceptions import ValidationError
from .streams import SeededStream

logger = logging.getLogger(__name__)

TRUNCATION = 1e-12
MASS_TOLERANCE = 1e-12
DEFAULT_BOOTSTRAP = 1000


@dataclass(frozen=True, eq=False)
class CountDistribution:
    """Probability mass function on {0, 1, ...} with explicit truncated tail."""
    pmf: np.ndarray
    tail_bound: float = 0.0
    sample_size: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        pmf = np.array(self.pmf, dtype=float, copy=True).ravel()
        if pmf.size == 0:
            raise ValidationError("pmf must have at least one entry")
        if np.any(pmf < 0) or self.tail_bound < 0:
            raise ValidationError("probabilities must be non-negative")
        total = float(pmf.sum()) + self.tail_bound
        # Round-off from summing or convolving grows with the support size.
        if abs(total - 1.0) > MASS_TOLERANCE * max(1, pmf.size):
            raise ValidationError(f"pmf plus tail must sum to 1, got {total!r}")
        pmf.setflags(write=False)
        object.__setattr__(self, "pmf", pmf)

    @property
    def support_max(self) -> int:
        return self.pmf.size - 1

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(self.pmf.size), self.pmf))

    @property
    def variance(self) -> float:
        k = np.arange(self.pmf.size)
        return float(np.dot(k * k, self.pmf)) - self.mean ** 2

    def prob(self, k: int) -> float:
        return float(self.pmf[k]) if 0 <= k < self.pmf.size else 0.0

    def expect(self, fn) -> float:
        """E fn(N) over the stored support."""
        k = np.arange(self.pmf.size)
        return float(np.dot(fn(k), self.pmf))

    def tv_halfwidth(self, stream: SeededStream, resamples: int = DEFAULT_BOOTSTRAP,
                     quantile: float = 0.99) -> float:
        """Bootstrap half-width of the TV error of an empirical law.

        Resamples the empirical law multinomially and returns the requested
        quantile of TV(resample, point estimate).
        """
        if self.sample_size is None:
            raise ValidationError("bootstrap half-width needs an empirical distribution")
        if resamples < 1:
            raise ValidationError("resamples must be positive")
        rng = stream.generator()
        probs = self.pmf / self.pmf.sum()
        draws = rng.multinomial(self.sample_size, probs, size=resamples) / self.sample_size
        tv = 0.5 * np.abs(draws - probs).sum(axis=1)
        return float(np.quantile(tv, quantile))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"k": np.arange(self.pmf.size).astype(str), "pmf": self.pmf})
        footer = pd.DataFrame({"k": ["tail_bound"], "pmf": [self.tail_bound]})
        return pd.concat([frame, footer], ignore_index=True)

    def to_csv(self, path: Union[str, Path]) -> None:
        self.to_frame().to_csv(path, index=False, float_format="%.17g")


@dataclass(frozen=True)
class TotalVariation:
    """TV distance with an error bar from truncated tails."""
    value: float
    error_bar: float = 0.0

    def __float__(self) -> float:
        return self.value


def poisson_counts(lam: float, cutoff: Optional[int] = None) -> CountDistribution:
    """Po(lam) truncated where the tail drops below 1e-12, or at a fixed cutoff."""
    if lam < 0 or not np.isfinite(lam):
        raise ValidationError(f"Poisson mean must be finite and non-negative, got {lam}")
    if lam == 0:
        return CountDistribution(np.array([1.0]), 0.0)
    if cutoff is None:
        cutoff = int(stats.poisson.isf(TRUNCATION / 10, lam)) + 1
        while stats.poisson.sf(cutoff, lam) >= TRUNCATION:
            cutoff += 1
    pmf = stats.poisson.pmf(np.arange(cutoff + 1), lam)
    tail = float(stats.poisson.sf(cutoff, lam))
    return CountDistribution(pmf, tail)


def binomial_counts(n: int, p: float) -> CountDistribution:
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValidationError(f"invalid binomial parameters n={n}, p={p}")
    pmf = stats.binom.pmf(np.arange(n + 1), n, p)
    return CountDistribution(pmf / pmf.sum(), 0.0)


def poisson_binomial_counts(p: Union[Sequence[float], np.ndarray]) -> CountDistribution:
    """Exact law of a sum of independent indicators, by convolution over indicators."""
    probs = np.asarray(p, dtype=float).ravel()
    if np.any((probs < 0) | (probs > 1)) or np.any(~np.isfinite(probs)):
        raise ValidationError("indicator probabilities must lie in [0, 1]")
    pmf = np.zeros(probs.size + 1)
    pmf[0] = 1.0
    for k, q in enumerate(probs, start=1):
        pmf[1:k + 1] = pmf[1:k + 1] * (1.0 - q) + pmf[0:k] * q
        pmf[0] *= 1.0 - q
    return CountDistribution(pmf, 0.0)


def empirical_counts(samples: Union[Sequence[int], np.ndarray]) -> CountDistribution:
    values = np.asarray(samples)
    if values.size == 0:
        raise ValidationError("empirical count law needs at least one sample")
    if np.any(values < 0) or not np.all(np.equal(np.mod(values, 1), 0)):
        raise ValidationError("count samples must be non-negative integers")
    counts = np.bincount(values.astype(np.int64).ravel())
    pmf = counts / values.size
    return CountDistribution(pmf, 0.0, sample_size=int(values.size))


def tv_distance(a: CountDistribution, b: CountDistribution) -> TotalVariation:
    """Half the l1 distance over the union support; tails go into the error bar."""
    size = max(a.pmf.size, b.pmf.size)
    pa = np.zeros(size)
    pb = np.zeros(size)
    pa[:a.pmf.size] = a.pmf
    pb[:b.pmf.size] = b.pmf
    value = 0.5 * float(np.abs(pa - pb).sum())
    return TotalVariation(value=min(value, 1.0), error_bar=0.5 * (a.tail_bound + b.tail_bound))
