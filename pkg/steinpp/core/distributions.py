"""
Lifetime distributions for delays and inter-arrival times.

Parametric laws (exponential, deterministic, uniform) and empirical CDFs that
are piecewise constant on a uniform time grid. All laws live on [0, inf]; a
deterministic law at infinity models "no arrival".
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from .exceptions import FiniteMeanError, ValidationError

ArrayLike = Union[float, np.ndarray]

# Tolerance for evaluating a jump that sits on a grid point.
GRID_SNAP = 1e-12
HEAVY_TAIL_TOLERANCE = 1e-6


class Distribution(ABC):
    """Law of a non-negative random time."""

    @abstractmethod
    def cdf(self, t: ArrayLike) -> np.ndarray:
        """Right-continuous distribution function."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Independent draws."""

    @property
    @abstractmethod
    def mean(self) -> float:
        """Expected value, possibly infinite."""

    def survival(self, t: ArrayLike) -> np.ndarray:
        return 1.0 - self.cdf(t)


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float

    def __post_init__(self):
        if not self.rate > 0 or not math.isfinite(self.rate):
            raise ValidationError(f"exponential rate must be positive, got {self.rate}")

    def cdf(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.where(t < 0, 0.0, -np.expm1(-self.rate * np.maximum(t, 0.0)))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.exponential(1.0 / self.rate, size)

    @property
    def mean(self) -> float:
        return 1.0 / self.rate


@dataclass(frozen=True)
class Deterministic(Distribution):
    """Point mass at `value`; value = inf never arrives."""
    value: float

    def __post_init__(self):
        if not self.value >= 0:
            raise ValidationError(f"deterministic time must be non-negative, got {self.value}")

    def cdf(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if math.isinf(self.value):
            return np.zeros_like(t)
        return np.where(t >= self.value - GRID_SNAP * max(1.0, self.value), 1.0, 0.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, float(self.value))

    @property
    def mean(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class Uniform(Distribution):
    low: float
    high: float

    def __post_init__(self):
        if not 0 <= self.low < self.high or not math.isfinite(self.high):
            raise ValidationError(f"uniform law needs 0 <= low < high, got [{self.low}, {self.high}]")

    def cdf(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.clip((t - self.low) / (self.high - self.low), 0.0, 1.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.low, self.high, size)

    @property
    def mean(self) -> float:
        return 0.5 * (self.low + self.high)


@dataclass(frozen=True, eq=False)
class Empirical(Distribution):
    """Step CDF: F(t) = values[k] for grid[k] <= t < grid[k+1]."""
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float, copy=True).ravel()
        values = np.array(self.values, dtype=float, copy=True).ravel()
        if grid.size < 2 or grid.size != values.size:
            raise ValidationError("empirical CDF needs matching grid and values with at least two points")
        steps = np.diff(grid)
        if grid[0] < 0 or np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
            raise ValidationError("empirical CDF grid must be uniform, increasing and start at t >= 0")
        if np.any(values < 0) or np.any(values > 1 + 1e-12) or np.any(np.diff(values) < -1e-12):
            raise ValidationError("empirical CDF values must be non-decreasing within [0, 1]")
        values = np.clip(np.maximum.accumulate(values), 0.0, 1.0)
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "Empirical":
        """Read a two-column (t, F(t)) CSV."""
        frame = pd.read_csv(path)
        if frame.shape[1] < 2:
            raise ValidationError(f"{path}: expected two columns t, F(t)")
        return cls(frame.iloc[:, 0].to_numpy(), frame.iloc[:, 1].to_numpy())

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def cdf(self, t: ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.grid, t + GRID_SNAP * max(1.0, float(self.grid[-1])), side="right") - 1
        out = np.where(idx >= 0, self.values[np.clip(idx, 0, None)], 0.0)
        return out

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        # Left-continuous inverse: smallest grid point with F >= u.
        u = rng.random(size)
        idx = np.searchsorted(self.values, u, side="left")
        out = np.full(size, np.inf)
        hit = idx < self.grid.size
        out[hit] = self.grid[idx[hit]]
        return out

    @property
    def mean(self) -> float:
        if self.values[-1] < 1.0:
            return math.inf
        return float(self.grid[0] + self.step * np.sum(1.0 - self.values[:-1]))


def stationary_delay(F: Distribution, grid: np.ndarray) -> Distribution:
    """Delay law G(t) = int_0^t (1 - F(s)) ds / int_0^inf (1 - F(s)) ds.

    Exponential inter-arrivals are returned unchanged. Otherwise the survival
    function is integrated with the midpoint rule on the uniform grid, which is
    exact for piecewise-linear survival with kinks on grid points; the grid must
    reach far enough that the truncated survival is below 1e-6.
    """
    if isinstance(F, Exponential):
        return F
    t = np.asarray(grid, dtype=float)
    if t.size < 2 or t[0] != 0.0:
        raise ValidationError("stationary delay grid must start at 0 and have at least two points")
    h = t[1] - t[0]
    if not np.allclose(np.diff(t), h, rtol=1e-9, atol=1e-12):
        raise ValidationError("stationary delay grid must be uniform")
    truncated = float(F.survival(t[-1]))
    if truncated > HEAVY_TAIL_TOLERANCE:
        raise FiniteMeanError(
            f"survival {truncated:.3g} at grid end exceeds {HEAVY_TAIL_TOLERANCE}; "
            "extend the grid or use a law with a lighter tail"
        )
    midpoints = 0.5 * (t[:-1] + t[1:])
    integral = np.concatenate([[0.0], np.cumsum(F.survival(midpoints) * h)])
    mu = integral[-1]
    if mu <= 0:
        raise ValidationError("inter-arrival law has zero mean")
    return Empirical(t, np.minimum(integral / mu, 1.0))
