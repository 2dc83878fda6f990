"""
Seeded samplers for every supported process family.

Covers Poisson processes, locally dependent indicator arrays (Bernoulli
processes among them), uniform points restricted to a window, independent
thinning, renewal processes, and the Palm couplings consumed by the general
bound estimator.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import (Callable, Dict, FrozenSet, Iterable, List, Optional,
                    Protocol, Sequence, Tuple, Union)

import numpy as np
from scipy import stats

from .carrier import POSITION_DECIMALS, Configuration, rescale, superpose, variation_norm_diff
from .distributions import Distribution, Exponential
from .exceptions import ModelError, ValidationError
from .matching import d1_prime
from .streams import SeededStream

logger = logging.getLogger(__name__)

LocationSampler = Callable[[np.random.Generator, int], np.ndarray]
Neighbourhoods = Tuple[FrozenSet[int], ...]

PROBABILITY_TOLERANCE = 1e-12
REJECTION_BATCHES = 1000


def uniform_locations(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.random(size)


def fixed_location(x: float) -> LocationSampler:
    """Location sampler that always returns x."""
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"carrier position must lie in [0, 1], got {x}")

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, float(x))
    return sampler


def _configuration(points: np.ndarray) -> Configuration:
    return Configuration.from_points(np.round(np.asarray(points, dtype=float), POSITION_DECIMALS))


# ---------------------------------------------------------------------------
# Indicator laws
# ---------------------------------------------------------------------------

class IndicatorLaw(ABC):
    """Joint law of an indicator vector, generated from a latent array."""

    verified: bool = True

    @abstractmethod
    def draw_latent(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw `size` independent latent states."""

    @abstractmethod
    def indicators(self, latent: np.ndarray) -> np.ndarray:
        """Map latent states to a (size, n) boolean indicator array."""

    def condition(self, latent: np.ndarray, i: int) -> Optional[np.ndarray]:
        """Couple latent states to the law conditioned on I_i = 1.

        Returns None when the law has no explicit construction; callers then
        fall back to rejection sampling.
        """
        return None


class IndependentLaw(IndicatorLaw):
    def __init__(self, p: np.ndarray):
        self.p = np.asarray(p, dtype=float)

    def draw_latent(self, rng, size):
        return rng.random((size, self.p.size)) < self.p

    def indicators(self, latent):
        return latent

    def condition(self, latent, i):
        out = latent.copy()
        out[:, i] = True
        return out


class BlockLaw(IndicatorLaw):
    """Indicators are equal within a block; blocks are independent."""

    def __init__(self, q: np.ndarray, block_of: np.ndarray):
        self.q = np.asarray(q, dtype=float)
        self.block_of = np.asarray(block_of, dtype=int)

    def draw_latent(self, rng, size):
        return rng.random((size, self.q.size)) < self.q

    def indicators(self, latent):
        return latent[:, self.block_of]

    def condition(self, latent, i):
        out = latent.copy()
        out[:, self.block_of[i]] = True
        return out


class RunLaw(IndicatorLaw):
    """I_i = J_i J_{i+1} for iid Bernoulli(q) variables J_0, ..., J_n."""

    def __init__(self, q: float, n: int):
        self.q = float(q)
        self.n = int(n)

    def draw_latent(self, rng, size):
        return rng.random((size, self.n + 1)) < self.q

    def indicators(self, latent):
        return latent[:, :-1] & latent[:, 1:]

    def condition(self, latent, i):
        out = latent.copy()
        out[:, i] = True
        out[:, i + 1] = True
        return out


class SamplerLaw(IndicatorLaw):
    """User-declared sampler; Palm draws come from rejection and are unverified."""

    verified = False

    def __init__(self, draw: Callable[[np.random.Generator, int], np.ndarray]):
        self._draw = draw

    def draw_latent(self, rng, size):
        return np.asarray(self._draw(rng, size), dtype=bool)

    def indicators(self, latent):
        return latent


def _palm_by_rejection(law: IndicatorLaw, i: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw `size` indicator vectors from the law conditioned on I_i = 1.

    The draws are independent of the caller's base latent state. Callers take
    Xi^(i) from the base draw and V_i_alpha from these, so the pair
    (Xi^(i), V_i_alpha) only has the right marginals: whenever Xi^(i) depends
    on V_i, Xi^(i) + V_i_alpha is not jointly the Palm process. Laws that reach
    this path carry verified = False, which surfaces as the unverified flag on
    every bound built from them.
    """
    accepted: List[np.ndarray] = []
    found = 0
    for _ in range(REJECTION_BATCHES):
        batch = law.indicators(law.draw_latent(rng, max(size, 64)))
        hits = batch[batch[:, i]]
        accepted.append(hits)
        found += hits.shape[0]
        if found >= size:
            return np.concatenate(accepted)[:size]
    raise ModelError(f"rejection sampler found {found} of {size} draws with I_{i} = 1")


def _resolve_positions(positions: Union[str, Sequence[float], np.ndarray, None], n: int) -> Optional[np.ndarray]:
    if positions is None or (isinstance(positions, str) and positions == "uniform"):
        return None
    if isinstance(positions, str):
        if positions != "grid":
            raise ValidationError(f"unknown positions layout {positions!r}")
        return np.round(np.arange(1, n + 1) / n, POSITION_DECIMALS) if n else np.empty(0)
    values = np.asarray(positions, dtype=float).ravel()
    if values.size != n:
        raise ValidationError(f"expected {n} positions, got {values.size}")
    if np.any((values < 0) | (values > 1)):
        raise ValidationError("positions must lie in [0, 1]")
    return np.round(values, POSITION_DECIMALS)


# ---------------------------------------------------------------------------
# Indicator models
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IndicatorModel:
    """Indicators I_i with marginals p_i, neighbourhoods A_i ⊆ B_i and joint moments.

    `joint` holds E I_i I_j for j in A_i \\ {i}, keyed by ordered pairs; both
    orientations are stored. `positions` are fixed carrier points or None for
    independent uniform positions U_i.
    """
    p: np.ndarray
    A: Neighbourhoods
    B: Neighbourhoods
    law: IndicatorLaw
    joint: Dict[Tuple[int, int], float] = field(default_factory=dict)
    positions: Optional[np.ndarray] = None
    kind: str = "custom"

    def __post_init__(self):
        p = np.array(self.p, dtype=float, copy=True).ravel()
        n = p.size
        if np.any(~np.isfinite(p)) or np.any((p < 0) | (p > 1)):
            raise ValidationError("indicator probabilities must lie in [0, 1]")
        if len(self.A) != n or len(self.B) != n:
            raise ValidationError(f"need {n} neighbourhoods A_i and B_i")
        A = tuple(frozenset(int(j) for j in a) for a in self.A)
        B = tuple(frozenset(int(j) for j in b) for b in self.B)
        for i in range(n):
            if i not in A[i]:
                raise ValidationError(f"A_{i} must contain {i}")
            if not A[i] <= B[i]:
                raise ValidationError(f"A_{i} must be a subset of B_{i}")
            if any(not 0 <= j < n for j in B[i]):
                raise ValidationError(f"B_{i} has indices outside 0..{n - 1}")
        joint: Dict[Tuple[int, int], float] = {}
        for (i, j), value in self.joint.items():
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValidationError(f"joint moment key ({i}, {j}) is not a pair of distinct indices")
            if not -PROBABILITY_TOLERANCE <= value <= min(p[i], p[j]) + PROBABILITY_TOLERANCE:
                raise ValidationError(f"E I_{i} I_{j} = {value} outside [0, min(p_{i}, p_{j})]")
            joint[(i, j)] = joint[(j, i)] = float(value)
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "joint", joint)
        object.__setattr__(self, "positions", _resolve_positions(self.positions, n))

    # -- constructors ------------------------------------------------------

    @classmethod
    def independent(cls, p: Sequence[float], positions="grid") -> "IndicatorModel":
        """Independent indicators; default positions (i+1)/n give the Bernoulli process."""
        probs = np.asarray(p, dtype=float).ravel()
        singletons = tuple(frozenset({i}) for i in range(probs.size))
        return cls(probs, singletons, singletons, IndependentLaw(probs),
                   positions=positions, kind="independent")

    @classmethod
    def blocks(cls, q: Sequence[float], sizes: Sequence[int], positions="grid") -> "IndicatorModel":
        """Indicators equal within each block, blocks independent with P(block on) = q_b."""
        q = np.asarray(q, dtype=float).ravel()
        if len(sizes) != q.size or any(int(s) < 1 for s in sizes):
            raise ValidationError("blocks need one positive size per block probability")
        block_of = np.repeat(np.arange(q.size), np.asarray(sizes, dtype=int))
        members = [frozenset(np.flatnonzero(block_of == b).tolist()) for b in range(q.size)]
        A = tuple(members[b] for b in block_of)
        p = q[block_of]
        joint = {(i, j): float(p[i]) for i in range(p.size) for j in A[i] if j != i}
        return cls(p, A, A, BlockLaw(q, block_of), joint=joint, positions=positions, kind="blocks")

    @classmethod
    def runs(cls, n: int, q: float, positions="grid") -> "IndicatorModel":
        """Head runs I_i = J_i J_{i+1}: p_i = q^2 and E I_i I_{i+1} = q^3."""
        if n < 1 or not 0.0 <= q <= 1.0:
            raise ValidationError(f"runs need n >= 1 and q in [0, 1], got n={n}, q={q}")
        A = tuple(frozenset(j for j in (i - 1, i, i + 1) if 0 <= j < n) for i in range(n))
        B = tuple(frozenset(j for j in range(i - 2, i + 3) if 0 <= j < n) for i in range(n))
        joint = {(i, i + 1): q ** 3 for i in range(n - 1)}
        return cls(np.full(n, q * q), A, B, RunLaw(q, n), joint=joint, positions=positions, kind="runs")

    @classmethod
    def custom(cls, p: Sequence[float], A: Iterable[Iterable[int]], B: Optional[Iterable[Iterable[int]]],
               joint: Dict[Tuple[int, int], float],
               draw: Callable[[np.random.Generator, int], np.ndarray],
               positions="uniform") -> "IndicatorModel":
        """User-declared model; its Palm draws are flagged unverified."""
        A = tuple(frozenset(a) for a in A)
        B = A if B is None else tuple(frozenset(b) for b in B)
        return cls(np.asarray(p, dtype=float), A, B, SamplerLaw(draw), joint=dict(joint),
                   positions=positions, kind="custom")

    # -- properties --------------------------------------------------------

    @property
    def n(self) -> int:
        return self.p.size

    @property
    def lambdas(self) -> np.ndarray:
        return self.p

    @property
    def neighbourhoods(self) -> Neighbourhoods:
        return self.A

    @property
    def is_independent(self) -> bool:
        return all(a == {i} for i, a in enumerate(self.A))

    @property
    def verified(self) -> bool:
        return self.law.verified

    def joint_moment(self, i: int, j: int) -> float:
        """E I_i I_j; indices outside A_i factorize."""
        if i == j:
            return float(self.p[i])
        if (i, j) in self.joint:
            return self.joint[(i, j)]
        if j not in self.A[i]:
            return float(self.p[i] * self.p[j])
        raise ModelError(f"missing joint moment E I_{i} I_{j} for neighbouring indices")

    def covariance(self, i: int, j: int) -> float:
        return self.joint_moment(i, j) - float(self.p[i] * self.p[j])

    def draw_indicators(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.law.indicators(self.law.draw_latent(rng, size))

    def draw_counts(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.draw_indicators(rng, size).astype(np.int64)

    def palm_indicators(self, i: int, latent: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Indicators conditioned on I_i = 1, coupled with `latent` where possible."""
        conditioned = self.law.condition(latent, i)
        if conditioned is None:
            return _palm_by_rejection(self.law, i, latent.shape[0], rng)
        return self.law.indicators(conditioned)


class CountModel(Protocol):
    """Anything that can draw joint component counts (|Xi_1|, ..., |Xi_n|)."""

    @property
    def lambdas(self) -> np.ndarray: ...

    @property
    def neighbourhoods(self) -> Neighbourhoods: ...

    def draw_counts(self, rng: np.random.Generator, size: int) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class FixedCountModel:
    """Independent components with deterministic counts, e.g. one point always."""
    counts: np.ndarray
    positions: Optional[np.ndarray] = None

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True).ravel()
        if np.any(counts < 0):
            raise ValidationError("component counts must be non-negative")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "positions", _resolve_positions(self.positions, counts.size))

    @property
    def lambdas(self) -> np.ndarray:
        return self.counts.astype(float)

    @property
    def neighbourhoods(self) -> Neighbourhoods:
        return tuple(frozenset({i}) for i in range(self.counts.size))

    def draw_counts(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.tile(self.counts, (size, 1))

    def sample(self, s: SeededStream) -> Configuration:
        rng = s.generator()
        positions = self.positions if self.positions is not None else rng.random(self.counts.size)
        return _configuration(np.repeat(positions, self.counts))


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def sample_poisson_process(lambda_total: float, location_sampler: Optional[LocationSampler],
                           s: SeededStream) -> Configuration:
    """Poisson count with total mean `lambda_total`, iid locations."""
    if lambda_total < 0 or not math.isfinite(lambda_total):
        raise ValidationError(f"intensity must be finite and non-negative, got {lambda_total}")
    rng = s.generator()
    count = int(rng.poisson(lambda_total))
    sampler = location_sampler or uniform_locations
    return _configuration(sampler(rng, count))


def sample_indicator_process(m: IndicatorModel, s: SeededStream) -> Configuration:
    """Xi = sum_i I_i delta_{U_i} for any indicator model."""
    rng = s.generator()
    on = m.draw_indicators(rng, 1)[0]
    positions = m.positions if m.positions is not None else rng.random(m.n)
    return _configuration(positions[on])


def sample_bernoulli_process(m: IndicatorModel, s: SeededStream) -> Configuration:
    if not m.is_independent:
        raise ValidationError("Bernoulli sampler needs independent indicators (A_i = {i})")
    return sample_indicator_process(m, s)


def sample_uniform_points_restriction(n: int, T: float, s: SeededStream) -> Configuration:
    """Throw n uniform points on [0, n] and keep the window [0, T), rescaled to [0, 1]."""
    if n < 1:
        raise ValidationError(f"need at least one point, got n={n}")
    if not 0 <= T <= n:
        raise ValidationError(f"window length must satisfy 0 <= T <= n, got T={T}, n={n}")
    if T == 0:
        return Configuration.empty()
    rng = s.generator()
    points = rng.uniform(0.0, n, n)
    return _configuration(points[points < T] / T)


def uniform_points_counts(n: int, T: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Window counts of `size` independent uniform-points experiments."""
    if n < 1 or not 0 <= T <= n:
        raise ValidationError(f"invalid uniform-points parameters n={n}, T={T}")
    return rng.binomial(n, T / n, size)


def thin(c: Configuration, p: float, s: SeededStream) -> Configuration:
    """Keep each unit of multiplicity independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"retention probability must lie in [0, 1], got {p}")
    if p == 1.0 or not c.atoms:
        return c
    if p == 0.0:
        return Configuration.empty()
    rng = s.generator()
    kept = rng.binomial(c.multiplicities, p)
    return Configuration(tuple((x, int(k)) for x, k in zip(c.positions.tolist(), kept) if k > 0))


def thin_counts(counts: np.ndarray, p: float, rng: np.random.Generator) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"retention probability must lie in [0, 1], got {p}")
    return rng.binomial(np.asarray(counts, dtype=np.int64), p)


def bernoulli_poisson_coupling(p: Union[Sequence[float], np.ndarray], size: int,
                               rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Site-wise maximal coupling of Bernoulli(p_j) indicators with Po(p_j) counts.

    Returns (indicators, counts), both of shape (size, len(p)). Site j
    disagrees with probability p_j (1 - exp(-p_j)), the TV distance between
    its two marginals.
    """
    probs = np.asarray(p, dtype=float).ravel()
    if np.any(~np.isfinite(probs)) or np.any((probs < 0) | (probs > 1)):
        raise ValidationError("site probabilities must lie in [0, 1]")
    on = rng.random((size, probs.size)) < probs
    counts = on.astype(np.int64)
    for j, q in enumerate(probs):
        if q == 0.0:
            continue
        # Given I_j = 1, keep N_j = 1 with probability exp(-q), else draw the residual law.
        rows = np.flatnonzero(on[:, j])
        moved = rows[rng.random(rows.size) >= math.exp(-q)]
        if not moved.size:
            continue
        support = np.arange(int(stats.poisson.isf(1e-16, q)) + 2)
        residual = stats.poisson.pmf(support, q)
        residual[0] = max(residual[0] - (1.0 - q), 0.0)
        residual[1] = 0.0
        counts[moved, j] = rng.choice(support, size=moved.size, p=residual / residual.sum())
    return on, counts


def coupling_mismatch(p: Union[Sequence[float], np.ndarray], positions: np.ndarray, size: int,
                      rng: np.random.Generator) -> np.ndarray:
    """Flags of replicates where the coupled site configurations differ.

    Sites sharing a position form one atom, so they are compared through
    their summed multiplicities.
    """
    on, counts = bernoulli_poisson_coupling(p, size, rng)
    if not on.shape[1]:
        return np.zeros(size, dtype=bool)
    sites = np.round(np.asarray(positions, dtype=float).ravel(), POSITION_DECIMALS)
    order = np.argsort(sites, kind="stable")
    _, starts = np.unique(sites[order], return_index=True)
    if starts.size == sites.size:
        return np.any(on.astype(np.int64) != counts, axis=1)
    process = np.add.reduceat(on[:, order].astype(np.int64), starts, axis=1)
    poisson = np.add.reduceat(counts[:, order], starts, axis=1)
    return np.any(process != poisson, axis=1)


# ---------------------------------------------------------------------------
# Renewal processes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RenewalSpec:
    """Delay G, inter-arrival F and horizon T of a renewal process on [0, T]."""
    F: Distribution
    G: Distribution
    T: float

    def __post_init__(self):
        if not self.T > 0 or not math.isfinite(self.T):
            raise ValidationError(f"horizon must be positive and finite, got {self.T}")
        for name in ("F", "G"):
            if not isinstance(getattr(self, name), Distribution):
                raise ValidationError(f"{name} must be a Distribution")
        if float(self.F.cdf(0.0)) >= 1.0:
            raise ValidationError("inter-arrival law is concentrated at 0")

    @property
    def F_T(self) -> float:
        return float(self.F.cdf(self.T))

    @property
    def G_T(self) -> float:
        return float(self.G.cdf(self.T))


def _renewal_epochs(spec: RenewalSpec, rng: np.random.Generator) -> np.ndarray:
    epochs = []
    t = float(spec.G.sample(rng, 1)[0])
    while t <= spec.T:
        epochs.append(t)
        t += float(spec.F.sample(rng, 1)[0])
    return np.asarray(epochs, dtype=float)


def sample_renewal(spec: RenewalSpec, s: SeededStream) -> Configuration:
    """Renewal epochs eta, eta + xi_1, ... inside [0, T], rescaled to [0, 1]."""
    rng = s.generator()
    return _configuration(rescale(_renewal_epochs(spec, rng), spec.T))


def renewal_counts(spec: RenewalSpec, size: int, rng: np.random.Generator) -> np.ndarray:
    """N_T for `size` independent copies, advanced in lockstep."""
    t = spec.G.sample(rng, size).astype(float)
    counts = np.zeros(size, dtype=np.int64)
    alive = np.flatnonzero(t <= spec.T)
    while alive.size:
        counts[alive] += 1
        t[alive] += spec.F.sample(rng, alive.size)
        alive = alive[t[alive] <= spec.T]
    return counts


def superposition_counts(specs: Sequence[RenewalSpec], size: int, rng: np.random.Generator) -> np.ndarray:
    """(size, n) component counts of independent renewal processes."""
    if not specs:
        return np.zeros((size, 0), dtype=np.int64)
    return np.column_stack([renewal_counts(spec, size, rng) for spec in specs])


def thinned_renewal_spec(spec: RenewalSpec, p: float) -> RenewalSpec:
    """Renewal representation of a p-thinned stationary Poisson renewal process."""
    if not 0.0 < p <= 1.0:
        raise ValidationError(f"retention probability must lie in (0, 1], got {p}")
    if not (isinstance(spec.F, Exponential) and isinstance(spec.G, Exponential)
            and spec.F.rate == spec.G.rate):
        raise ModelError("thinned renewal representation is only available for stationary exponential renewals")
    rate = spec.F.rate * p
    return RenewalSpec(Exponential(rate), Exponential(rate), spec.T)


# ---------------------------------------------------------------------------
# Palm couplings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PalmQuadruple:
    """One joint draw (alpha, Xi_i, Xi_i_alpha, V_i, V_i_alpha) with Xi^(i).

    `far` is sum_{j not in B_i} Xi_j when second-level neighbourhoods exist.
    """
    alpha: float
    xi: Configuration
    xi_alpha: Configuration
    v: Configuration
    v_alpha: Configuration
    rest: Configuration
    far: Optional[Configuration] = None


@dataclass(frozen=True, eq=False)
class PalmStatistics:
    """Per-replicate integrands for one index, arrays of equal length."""
    v_count_gap: np.ndarray
    xi_count_gap: np.ndarray
    v_variation: np.ndarray
    xi_variation: np.ndarray
    v_d1: Optional[np.ndarray]
    xi_d1: Optional[np.ndarray]
    rest_mass: np.ndarray
    far_mass: np.ndarray

    @classmethod
    def from_quadruples(cls, quads: Sequence[PalmQuadruple], matching: bool) -> "PalmStatistics":
        def arr(values):
            return np.asarray(list(values), dtype=float)
        return cls(
            v_count_gap=arr(abs(q.v.total_mass - q.v_alpha.total_mass) for q in quads),
            xi_count_gap=arr(abs(q.xi.total_mass - q.xi_alpha.total_mass) for q in quads),
            v_variation=arr(variation_norm_diff(q.v, q.v_alpha) for q in quads),
            xi_variation=arr(variation_norm_diff(q.xi, q.xi_alpha) for q in quads),
            v_d1=arr(d1_prime(q.v, q.v_alpha) for q in quads) if matching else None,
            xi_d1=arr(d1_prime(q.xi, q.xi_alpha) for q in quads) if matching else None,
            rest_mass=arr(q.rest.total_mass for q in quads),
            far_mass=arr((q.far if q.far is not None else q.rest).total_mass for q in quads),
        )


class PalmCoupling(ABC):
    """Declared coupling of each component with its reduced Palm version.

    Subclasses supply the mean masses lambda_i, a location sampler for the
    normalized mean measure of each component and the joint quadruple draw.
    `verified` is True only for couplings whose Palm law is known exactly.
    """

    verified: bool = False

    @property
    @abstractmethod
    def lambdas(self) -> np.ndarray:
        """Total mean mass lambda_i of each component."""

    @property
    def size(self) -> int:
        return int(self.lambdas.size)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.lambdas))

    @abstractmethod
    def sample_alpha(self, i: int, rng: np.random.Generator) -> float:
        """Draw alpha from lambda_i(d alpha) / lambda_i."""

    @abstractmethod
    def sample_quadruple(self, i: int, alpha: float, rng: np.random.Generator) -> PalmQuadruple:
        """Joint draw of the quadruple at alpha plus Xi^(i)."""

    def statistics(self, i: int, size: int, rng: np.random.Generator, matching: bool = True) -> PalmStatistics:
        """Integrand samples for index i; subclasses may vectorize."""
        quads = [self.sample_quadruple(i, self.sample_alpha(i, rng), rng) for _ in range(size)]
        return PalmStatistics.from_quadruples(quads, matching)


class PoissonCoupling(PalmCoupling):
    """Independent Poisson components; the reduced Palm process is the process itself."""

    verified = True

    def __init__(self, lambdas: Sequence[float], locations: Optional[Sequence[LocationSampler]] = None):
        values = np.asarray(lambdas, dtype=float).ravel()
        if np.any(values < 0) or np.any(~np.isfinite(values)):
            raise ValidationError("Poisson intensities must be finite and non-negative")
        if locations is not None and len(locations) != values.size:
            raise ValidationError("need one location sampler per component")
        self._lambdas = values
        self._locations = list(locations) if locations is not None else [uniform_locations] * values.size

    @property
    def lambdas(self) -> np.ndarray:
        return self._lambdas

    @property
    def neighbourhoods(self) -> Neighbourhoods:
        return tuple(frozenset({i}) for i in range(self.size))

    def draw_counts(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.poisson(self._lambdas, (size, self.size))

    def _component(self, j: int, rng: np.random.Generator) -> Configuration:
        return _configuration(self._locations[j](rng, int(rng.poisson(self._lambdas[j]))))

    def sample_alpha(self, i, rng):
        return float(self._locations[i](rng, 1)[0])

    def sample_quadruple(self, i, alpha, rng):
        xi = self._component(i, rng)
        rest = superpose(self._component(j, rng) for j in range(self.size) if j != i)
        empty = Configuration.empty()
        return PalmQuadruple(alpha=alpha, xi=xi, xi_alpha=xi, v=empty, v_alpha=empty, rest=rest, far=rest)

    def statistics(self, i, size, rng, matching=True):
        zeros = np.zeros(size)
        rest = rng.poisson(self.total_mass - self._lambdas[i], size).astype(float)
        return PalmStatistics(zeros, zeros, zeros, zeros,
                              zeros if matching else None, zeros if matching else None,
                              rest, rest)


class IndicatorCoupling(PalmCoupling):
    """Xi_i = I_i delta_{U_i} with Xi_i_alpha = 0 and V_i_alpha from I given I_i = 1."""

    def __init__(self, model: IndicatorModel):
        self.model = model
        self.verified = model.verified

    @property
    def lambdas(self) -> np.ndarray:
        return self.model.p

    @property
    def neighbourhoods(self) -> Neighbourhoods:
        return self.model.A

    def draw_counts(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.model.draw_counts(rng, size)

    def sample_alpha(self, i, rng):
        if self.model.positions is not None:
            return float(self.model.positions[i])
        return float(rng.random())

    def _positions(self, i: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
        if self.model.positions is not None:
            return self.model.positions
        positions = rng.random(self.model.n)
        positions[i] = alpha
        return positions

    def sample_quadruple(self, i, alpha, rng):
        m = self.model
        latent = m.law.draw_latent(rng, 1)
        base = m.law.indicators(latent)[0]
        palm = m.palm_indicators(i, latent, rng)[0]
        positions = self._positions(i, alpha, rng)
        others = np.array(sorted(m.A[i] - {i}), dtype=int)
        outside = np.array([j for j in range(m.n) if j not in m.A[i]], dtype=int)
        far = np.array([j for j in range(m.n) if j not in m.B[i]], dtype=int)

        def pick(on: np.ndarray, idx: np.ndarray) -> Configuration:
            return _configuration(positions[idx][on[idx]]) if idx.size else Configuration.empty()

        xi = _configuration([positions[i]]) if base[i] else Configuration.empty()
        return PalmQuadruple(alpha=alpha, xi=xi, xi_alpha=Configuration.empty(),
                             v=pick(base, others), v_alpha=pick(palm, others),
                             rest=pick(base, outside), far=pick(base, far))

    def statistics(self, i, size, rng, matching=True):
        m = self.model
        latent = m.law.draw_latent(rng, size)
        base = m.law.indicators(latent)
        palm = m.palm_indicators(i, latent, rng)
        others = np.array(sorted(m.A[i] - {i}), dtype=int)
        outside = np.ones(m.n, dtype=bool)
        outside[list(m.A[i])] = False
        far = np.ones(m.n, dtype=bool)
        far[list(m.B[i])] = False

        xi = base[:, i].astype(float)
        v_base = base[:, others].astype(np.int64)
        v_palm = palm[:, others].astype(np.int64)
        v_count_gap = np.abs(v_base.sum(axis=1) - v_palm.sum(axis=1)).astype(float)

        # Indicators sharing a fixed position form one atom.
        if m.positions is not None and others.size:
            _, group = np.unique(m.positions[others], return_inverse=True)
            onehot = np.eye(group.max() + 1, dtype=np.int64)[group]
            v_variation = np.abs(v_base @ onehot - v_palm @ onehot).sum(axis=1).astype(float)
        else:
            v_variation = np.abs(v_base - v_palm).sum(axis=1).astype(float)

        v_d1 = None
        if matching:
            v_d1 = np.zeros(size)
            differ = np.flatnonzero(np.any(v_base != v_palm, axis=1))
            if differ.size:
                if m.positions is not None:
                    positions = np.broadcast_to(m.positions[others], (differ.size, others.size))
                else:
                    positions = rng.random((differ.size, others.size))
                for row, r in enumerate(differ):
                    a = _configuration(positions[row][v_base[r].astype(bool)])
                    b = _configuration(positions[row][v_palm[r].astype(bool)])
                    v_d1[r] = d1_prime(a, b)

        return PalmStatistics(
            v_count_gap=v_count_gap,
            xi_count_gap=xi,
            v_variation=v_variation,
            xi_variation=xi,
            v_d1=v_d1,
            xi_d1=xi if matching else None,
            rest_mass=base[:, outside].sum(axis=1).astype(float),
            far_mass=base[:, far].sum(axis=1).astype(float),
        )


def sample_palm_quadruple(pc: PalmCoupling, i: int, s: SeededStream) -> PalmQuadruple:
    """Draw alpha from the normalized mean measure of component i, then the quadruple."""
    if not 0 <= i < pc.size:
        raise ModelError(f"coupling has no component {i}")
    if pc.lambdas[i] <= 0:
        raise ValidationError(f"component {i} has zero mean mass; nothing to condition on")
    rng = s.generator()
    alpha = pc.sample_alpha(i, rng)
    return pc.sample_quadruple(i, alpha, rng)
