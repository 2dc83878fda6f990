"""
Error bounds for Poisson process approximation.

Closed-form evaluators and Monte Carlo estimators for the dtv, d2 and dTV
bounds of locally dependent superpositions, independent superpositions,
locally dependent indicators, thinned processes and sparse renewal
superpositions. Every evaluator returns a BoundReport whose terms are already
scaled by the leading factors, so the value is the sum of the terms.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .count_dist import poisson_binomial_counts
from .exceptions import ModelError, ValidationError
from .processes import (CountModel, FixedCountModel, IndicatorModel, Neighbourhoods,
                        PalmCoupling, PoissonCoupling, RenewalSpec)
from .renewal import RenewalSolution
from .streams import SeededStream

logger = logging.getLogger(__name__)

STEIN_UNIFORM = 3.5
STEIN_NONUNIFORM = 2.5
BERNOULLI_D2_CONSTANT = 6.0
RENEWAL_CONSTANT = 6.0
MIN_CONDITIONAL_SAMPLES = 100
SUM_TOLERANCE = 1e-12
MOMENT_TOLERANCE = 1e-12


class Metric(str, Enum):
    """Distances between point process laws."""
    COUNT_TV = "dtv"
    D2 = "d2"
    PROCESS_TV = "dTV"


class BoundFlag(str, Enum):
    VACUOUS = "vacuous"
    UNVERIFIED = "unverified"
    CONDITIONAL_FALLBACK = "conditional-fallback"


class BoundReport(BaseModel):
    """A bound value with its per-term breakdown and provenance."""
    metric: Metric
    value: float = Field(ge=0.0)
    terms: Dict[str, float] = Field(default_factory=dict)
    formula_id: str
    mc_stderr: Optional[float] = Field(default=None, ge=0.0)
    interpretation: Optional[str] = None
    flags: List[BoundFlag] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_terms(self) -> "BoundReport":
        total = sum(self.terms.values())
        if abs(total - self.value) > SUM_TOLERANCE * max(1.0, abs(self.value)):
            raise ValueError(f"terms sum to {total!r}, value is {self.value!r}")
        return self

    @property
    def vacuous(self) -> bool:
        """Distances never exceed 1."""
        return self.value > 1.0

    def to_row(self) -> Dict[str, object]:
        return {
            "formula_id": self.formula_id,
            "metric": self.metric.value,
            "value": self.value,
            "mc_stderr": self.mc_stderr,
            "flags": ";".join(flag.value for flag in self.flags),
        }


def _labels(n: int) -> List[str]:
    return [f"i={i}" for i in range(n)]


def _report(metric: Metric, formula_id: str, terms: Sequence[float], *,
            labels: Optional[Sequence[str]] = None, stderr: Optional[float] = None,
            interpretation: Optional[str] = None,
            flags: Sequence[BoundFlag] = ()) -> BoundReport:
    labels = list(labels) if labels is not None else _labels(len(terms))
    breakdown = {label: float(t) for label, t in zip(labels, terms)}
    value = float(sum(breakdown.values()))
    flags = list(dict.fromkeys(flags))
    if value > 1.0:
        flags.append(BoundFlag.VACUOUS)
        logger.warning(f"Bound {formula_id} ({Metric(metric).value}) is vacuous: {value:.6g} > 1")
    return BoundReport(metric=metric, value=max(value, 0.0), terms=breakdown, formula_id=formula_id,
                       mc_stderr=stderr, interpretation=interpretation, flags=flags)


def _zero(metric: Metric, formula_id: str, n: int) -> BoundReport:
    return _report(metric, formula_id, [0.0] * n)


def tv_factor(lam: float) -> float:
    """(1 - e^{-lam}) / lam, with the limit 1 at lam = 0."""
    return 1.0 if lam == 0 else -math.expm1(-lam) / lam


def kappa_factor(lam: float, kappa: float, denominator: float) -> float:
    """3.5/lam + 2.5 (sqrt(kappa (1 + kappa/4)) + 1 + kappa/2) / denominator."""
    return (STEIN_UNIFORM / lam
            + STEIN_NONUNIFORM * (math.sqrt(kappa * (1.0 + kappa / 4.0)) + 1.0 + kappa / 2.0) / denominator)


def _stderr(psi: np.ndarray) -> float:
    if psi.size < 2:
        return 0.0
    return float(np.std(psi, ddof=1) / math.sqrt(psi.size))


def _metric(metric) -> Metric:
    try:
        return Metric(metric)
    except ValueError:
        raise ValidationError(f"unknown metric {metric!r}; expected one of dtv, d2, dTV")


# ---------------------------------------------------------------------------
# Moment inputs
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IndependentMoments:
    """Per-component lambda_i and E|Xi_i|^2 of an independent superposition.

    `count_gaps` and `variation_gaps` optionally hold the exact Palm integrals
    E int ||Xi_i| - |Xi_i_alpha|| lambda_i(d alpha) and the variation-norm
    analogue; without them the size-bias identity bounds both.
    """
    lambdas: np.ndarray
    second: np.ndarray
    count_gaps: Optional[np.ndarray] = None
    variation_gaps: Optional[np.ndarray] = None

    def __post_init__(self):
        lambdas = np.asarray(self.lambdas, dtype=float).ravel()
        second = np.asarray(self.second, dtype=float).ravel()
        if lambdas.size != second.size:
            raise ValidationError("lambdas and second moments must have equal length")
        if np.any(lambdas < 0) or np.any(~np.isfinite(lambdas)) or np.any(~np.isfinite(second)):
            raise ValidationError("means must be finite and non-negative")
        if np.any(second - lambdas ** 2 < -MOMENT_TOLERANCE * np.maximum(1.0, second)):
            raise ValidationError("negative variance: E|Xi_i|^2 < (E|Xi_i|)^2")
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "second", second)
        for name in ("count_gaps", "variation_gaps"):
            gaps = getattr(self, name)
            if gaps is not None:
                gaps = np.asarray(gaps, dtype=float).ravel()
                if gaps.size != lambdas.size or np.any(gaps < 0):
                    raise ValidationError(f"{name} must be non-negative, one per component")
                object.__setattr__(self, name, gaps)

    @property
    def variance(self) -> np.ndarray:
        return np.maximum(self.second - self.lambdas ** 2, 0.0)

    @classmethod
    def from_renewal(cls, solutions: Sequence[RenewalSolution]) -> "IndependentMoments":
        """lambda_i = V_i(T) and E N^2 = V2_i(T) - V_i(T)."""
        lambdas = np.array([sol.V_T for sol in solutions])
        second = np.array([sol.V2_T - sol.V_T for sol in solutions])
        return cls(lambdas, np.maximum(second, lambdas ** 2))

    @classmethod
    def from_indicators(cls, p: Sequence[float]) -> "IndependentMoments":
        probs = np.asarray(p, dtype=float)
        return cls(probs, probs.copy())


@dataclass(frozen=True, eq=False)
class ComponentMoments:
    """Moments of a locally dependent superposition, V_i = sum_{j in A_i, j != i} Xi_j.

    `kappa` and `far_mass` (sum of lambda_j outside B_i) feed the closed-form
    d2 bound and are optional elsewhere.
    """
    lambdas: np.ndarray
    second: np.ndarray
    mean_v: np.ndarray
    mean_vx: np.ndarray
    kappa: Optional[np.ndarray] = None
    far_mass: Optional[np.ndarray] = None

    def __post_init__(self):
        arrays = {}
        for name in ("lambdas", "second", "mean_v", "mean_vx", "kappa", "far_mass"):
            value = getattr(self, name)
            if value is None:
                continue
            arr = np.asarray(value, dtype=float).ravel()
            if np.any(~np.isfinite(arr)) or np.any(arr < -MOMENT_TOLERANCE):
                raise ValidationError(f"{name} must be finite and non-negative")
            arrays[name] = arr
        n = arrays["lambdas"].size
        if any(arr.size != n for arr in arrays.values()):
            raise ValidationError("all moment vectors must have one entry per component")
        if np.any(arrays["second"] - arrays["lambdas"] ** 2 < -MOMENT_TOLERANCE * np.maximum(1.0, arrays["second"])):
            raise ValidationError("inconsistent moments: E|Xi_i|^2 < (E|Xi_i|)^2")
        for name, arr in arrays.items():
            object.__setattr__(self, name, np.maximum(arr, 0.0))

    @property
    def total(self) -> float:
        return float(self.lambdas.sum())

    @classmethod
    def from_indicators(cls, m: IndicatorModel) -> "ComponentMoments":
        """Exact moments; |Xi_i| = I_i so E|Xi_i|^2 = p_i."""
        p = m.p
        mean_v = np.array([sum(p[j] for j in sorted(m.A[i] - {i})) for i in range(m.n)], dtype=float)
        mean_vx = np.array([sum(m.joint_moment(i, j) for j in sorted(m.A[i] - {i})) for i in range(m.n)],
                           dtype=float)
        kappa, far_mass = _indicator_kappas(m)
        return cls(p, p.copy(), mean_v, mean_vx, kappa, far_mass)

    @classmethod
    def from_fixed_counts(cls, m: FixedCountModel) -> "ComponentMoments":
        c = m.lambdas
        zeros = np.zeros_like(c)
        far = np.array([c.sum() - c[i] for i in range(c.size)])
        return cls(c, c ** 2, zeros, zeros, zeros.copy(), far)

    @classmethod
    def exact(cls, model: CountModel) -> "ComponentMoments":
        if isinstance(model, IndicatorModel):
            return cls.from_indicators(model)
        if isinstance(model, FixedCountModel):
            return cls.from_fixed_counts(model)
        if isinstance(model, PoissonCoupling):
            lam = model.lambdas
            zeros = np.zeros_like(lam)
            far = lam.sum() - lam
            return cls(lam, lam + lam ** 2, zeros, zeros, zeros.copy(), far)
        raise ModelError(f"no exact moments for {type(model).__name__}")

    @classmethod
    def estimate(cls, model: CountModel, replicates: int, stream: SeededStream,
                 B: Optional[Neighbourhoods] = None) -> "ComponentMoments":
        """Monte Carlo moments from joint count draws."""
        if replicates < 2:
            raise ValidationError("moment estimation needs at least two replicates")
        counts = np.asarray(model.draw_counts(stream.generator(), replicates), dtype=float)
        A = model.neighbourhoods
        n = counts.shape[1]
        v = np.column_stack([counts[:, sorted(A[i] - {i})].sum(axis=1) for i in range(n)]) if n else counts
        lambdas = counts.mean(axis=0)
        kappa = far_mass = None
        if B is not None:
            far_sums = [counts[:, [j for j in range(n) if j not in B[i]]].sum(axis=1) for i in range(n)]
            far_mass = np.array([float(lambdas[[j for j in range(n) if j not in B[i]]].sum()) for i in range(n)])
            kappa = np.array([float(np.var(fs, ddof=1)) / (fm + 1.0) for fs, fm in zip(far_sums, far_mass)])
        second = np.maximum((counts ** 2).mean(axis=0), lambdas ** 2)
        return cls(lambdas, second, v.mean(axis=0), (v * counts).mean(axis=0), kappa, far_mass)


def _indicator_kappas(m: IndicatorModel):
    """kappa_i = sum_{j1, j2 outside B_i, j2 in A_j1} cov(I_j1, I_j2) / (sum_{j outside B_i} p_j + 1)."""
    kappa = np.zeros(m.n)
    far_mass = np.zeros(m.n)
    for i in range(m.n):
        outside = [j for j in range(m.n) if j not in m.B[i]]
        outside_set = set(outside)
        far_mass[i] = float(sum(m.p[j] for j in outside))
        var = 0.0
        for j1 in outside:
            for j2 in sorted(m.A[j1] & outside_set):
                var += m.covariance(j1, j2)
        kappa[i] = max(var, 0.0) / (far_mass[i] + 1.0)
    return kappa, far_mass


# ---------------------------------------------------------------------------
# General superpositions
# ---------------------------------------------------------------------------

def mc_bound_theorem21(pc: PalmCoupling, metric, replicates: int, s: SeededStream,
                       variant: str = "ld1") -> BoundReport:
    """Monte Carlo estimate of the general bound from a declared Palm coupling.

    For d2 the random factor 3.5/lambda + 2.5/(|Xi^(i)|+1) multiplies the V
    integrand inside the expectation; the Xi integrand uses the product of
    expectations. variant="ld2" decouples the V factor through the mass outside
    B_i instead. Standard errors combine per-index delta-method variances.
    """
    metric = _metric(metric)
    if pc is None:
        raise ModelError("no Palm coupling supplied")
    if replicates < 1:
        raise ValidationError("replicates must be at least 1")
    if variant not in ("ld1", "ld2"):
        raise ValidationError(f"unknown variant {variant!r}")
    if metric is not Metric.D2 and variant == "ld2":
        variant = "ld1"

    lambdas = pc.lambdas
    lam = float(lambdas.sum())
    formula_id = {Metric.COUNT_TV: "palm.dtv", Metric.PROCESS_TV: "palm.dTV"}.get(metric, f"palm.d2.{variant}")
    flags = [] if pc.verified else [BoundFlag.UNVERIFIED]
    if not pc.verified:
        logger.warning("Palm coupling is declared but unverified; bound carries the unverified flag")
    if lam == 0:
        return _report(metric, formula_id, [0.0] * lambdas.size, flags=flags)

    f = STEIN_UNIFORM / lam
    terms = np.zeros(lambdas.size)
    variance = 0.0
    for i, lam_i in enumerate(lambdas):
        if lam_i <= 0:
            continue
        try:
            stats_i = pc.statistics(i, replicates, s.spawn("palm", i).generator(),
                                    matching=metric is Metric.D2)
        except NotImplementedError as e:
            raise ModelError(f"coupling has no sampler for component {i}: {e}")

        if metric is Metric.COUNT_TV:
            psi = tv_factor(lam) * lam_i * (stats_i.v_count_gap + stats_i.xi_count_gap)
            terms[i] = float(psi.mean())
        elif metric is Metric.PROCESS_TV:
            psi = lam_i * (stats_i.v_variation + stats_i.xi_variation)
            terms[i] = float(psi.mean())
        else:
            w = STEIN_NONUNIFORM / (stats_i.rest_mass + 1.0)
            a = lam_i * stats_i.v_d1
            b = lam_i * stats_i.xi_d1
            w_bar, b_bar = float(w.mean()), float(b.mean())
            if variant == "ld1":
                terms[i] = float(((f + w) * a).mean()) + (f + w_bar) * b_bar
                psi = (f + w) * a + (f + w_bar) * b + b_bar * w
            else:
                wf = STEIN_NONUNIFORM / (stats_i.far_mass + 1.0)
                wf_bar, a_bar = float(wf.mean()), float(a.mean())
                terms[i] = (f + wf_bar) * a_bar + (f + w_bar) * b_bar
                psi = (f + wf_bar) * a + a_bar * wf + (f + w_bar) * b + b_bar * w
        variance += _stderr(psi) ** 2

    logger.debug(f"{formula_id}: {replicates} replicates per component, total {terms.sum():.6g}")
    return _report(metric, formula_id, terms, stderr=math.sqrt(variance), flags=flags)


def bound_theorem21_kappa(moments: ComponentMoments) -> BoundReport:
    """Closed-form d2 bound from per-component moments and kappa_i."""
    if moments.kappa is None or moments.far_mass is None:
        raise ModelError("closed-form d2 bound needs kappa_i and the mass outside B_i")
    lam = moments.total
    if lam == 0:
        return _zero(Metric.D2, "palm.d2.kappa", moments.lambdas.size)
    lam_i = moments.lambdas
    inner = lam_i * moments.mean_v + moments.mean_vx + lam_i ** 2 + moments.second - lam_i
    factors = np.array([kappa_factor(lam, k, fm + 1.0) for k, fm in zip(moments.kappa, moments.far_mass)])
    return _report(Metric.D2, "palm.d2.kappa", factors * inner)


def bound_cor22(moments: IndependentMoments, metric) -> BoundReport:
    """Bounds for independent superpositions from per-component moments."""
    metric = _metric(metric)
    lam_i = moments.lambdas
    lam = float(lam_i.sum())
    size_bias = lam_i ** 2 + moments.second - lam_i
    if metric is Metric.D2:
        if lam == 0:
            return _zero(metric, "independent.d2.kappa", lam_i.size)
        denominator = lam - float(lam_i.max()) + 1.0
        kappa = float(moments.variance.sum()) / denominator
        factor = kappa_factor(lam, kappa, denominator)
        return _report(metric, "independent.d2.kappa", factor * size_bias,
                       interpretation=f"kappa={kappa:.12g}")
    if metric is Metric.COUNT_TV:
        raw = moments.count_gaps if moments.count_gaps is not None else size_bias
        return _report(metric, "independent.dtv", tv_factor(lam) * raw)
    raw = moments.variation_gaps if moments.variation_gaps is not None else size_bias
    return _report(metric, "independent.dTV", raw)


# ---------------------------------------------------------------------------
# Locally dependent indicators
# ---------------------------------------------------------------------------

def _indicator_neighbour_sums(m: IndicatorModel) -> np.ndarray:
    """sum_{j in A_i, j != i} E I_i I_j + sum_{j in A_i} p_i p_j for each i."""
    raw = np.zeros(m.n)
    for i in range(m.n):
        joint = sum(m.joint_moment(i, j) for j in sorted(m.A[i] - {i}))
        product = sum(m.p[i] * m.p[j] for j in sorted(m.A[i]))
        raw[i] = joint + product
    return raw


def bound_cor23(m: IndicatorModel, metric, variant: str = "kappa", replicates: int = 10_000,
                stream: Optional[SeededStream] = None) -> BoundReport:
    """Bounds for Xi = sum I_i delta_{U_i} with locally dependent indicators.

    d2 variants: "S" conditions on the mass outside A_i (Monte Carlo), "W"
    uses the mass outside B_i (exact for independent indicators, Monte Carlo
    otherwise), "kappa" is closed form.
    """
    metric = _metric(metric)
    raw = _indicator_neighbour_sums(m)
    lam = float(m.p.sum())
    flags = [] if m.verified else [BoundFlag.UNVERIFIED]

    if metric is Metric.COUNT_TV:
        return _report(metric, "indicators.dtv", tv_factor(lam) * raw, flags=flags)
    if metric is Metric.PROCESS_TV:
        return _report(metric, "indicators.dTV", raw, flags=flags)

    if variant not in ("S", "W", "kappa"):
        raise ValidationError(f"unknown d2 variant {variant!r}; expected S, W or kappa")
    formula_id = f"indicators.d2.{variant}"
    if lam == 0:
        return _zero(metric, formula_id, m.n)

    if variant == "kappa":
        kappa, far_mass = _indicator_kappas(m)
        factors = np.array([kappa_factor(lam, k, fm + 1.0) for k, fm in zip(kappa, far_mass)])
        return _report(metric, formula_id, factors * raw, flags=flags)

    if variant == "W" and m.is_independent:
        expectations = np.array([
            poisson_binomial_counts(m.p[[j for j in range(m.n) if j not in m.B[i]]])
            .expect(lambda k: STEIN_NONUNIFORM / (k + 1.0))
            for i in range(m.n)
        ])
        return _report(metric, formula_id, (STEIN_UNIFORM / lam + expectations) * raw, flags=flags)

    if stream is None:
        raise ValidationError(f"variant {variant} needs a random stream for its Monte Carlo part")
    if replicates < 1:
        raise ValidationError("replicates must be at least 1")
    on = m.draw_indicators(stream.spawn("indicators", variant).generator(), replicates)
    counts = on.astype(float)
    f = STEIN_UNIFORM / lam
    psi = np.zeros((replicates, m.n))

    if variant == "W":
        for i in range(m.n):
            outside = [j for j in range(m.n) if j not in m.B[i]]
            w = STEIN_NONUNIFORM / (counts[:, outside].sum(axis=1) + 1.0)
            psi[:, i] = (f + w) * raw[i]
        return _report(metric, formula_id, psi.mean(axis=0), stderr=_stderr(psi.sum(axis=1)), flags=flags)

    for i in range(m.n):
        neighbours = sorted(m.A[i] - {i})
        outside = [j for j in range(m.n) if j not in m.A[i]]
        w = STEIN_NONUNIFORM / (counts[:, outside].sum(axis=1) + 1.0)
        pair = counts[:, i] * counts[:, neighbours].sum(axis=1)
        psi[:, i] = (f + w) * pair
        for j in sorted(m.A[i]):
            weight = float(m.p[i] * m.p[j])
            if weight == 0:
                continue
            if int(on[:, j].sum()) < MIN_CONDITIONAL_SAMPLES:
                # Too few draws with I_j = 1: use the unconditional maximum of the factor.
                psi[:, i] += weight * (f + STEIN_NONUNIFORM)
                flags.append(BoundFlag.CONDITIONAL_FALLBACK)
            else:
                psi[:, i] += weight * (f + w * counts[:, j] / m.p[j])
    if BoundFlag.CONDITIONAL_FALLBACK in flags:
        logger.warning(f"Fewer than {MIN_CONDITIONAL_SAMPLES} conditional draws for some indices; "
                       "substituted the unconditioned factor")
    return _report(metric, formula_id, psi.mean(axis=0), stderr=_stderr(psi.sum(axis=1)), flags=flags)


def bound_bernoulli(p: Sequence[float], metric) -> BoundReport:
    """Closed forms for the Bernoulli process sum_i I_i delta_{i/n}."""
    metric = _metric(metric)
    probs = np.asarray(p, dtype=float).ravel()
    if np.any(~np.isfinite(probs)) or np.any((probs < 0) | (probs > 1)):
        raise ValidationError("probabilities must lie in [0, 1]")
    squares = probs * probs
    lam = float(probs.sum())
    if metric is Metric.COUNT_TV:
        return _report(metric, "bernoulli.dtv", tv_factor(lam) * squares)
    if metric is Metric.PROCESS_TV:
        return _report(metric, "bernoulli.dTV", squares)
    if probs.size == 0:
        return _zero(metric, "bernoulli.d2", 0)
    gap = lam - float(probs.max())
    if gap <= 0:
        raise ValidationError(f"d2 bound needs lambda > max p_i, got lambda={lam}, max p_i={probs.max()}")
    return _report(metric, "bernoulli.d2", BERNOULLI_D2_CONSTANT / gap * squares)


def bound_uniform_points(n: int, T: float) -> BoundReport:
    """d2 bound 6T/(n-1) for n uniform points restricted to a window of length T."""
    if n < 2:
        raise ValidationError(f"uniform-points bound needs n >= 2, got {n}")
    if not 0 <= T <= n:
        raise ValidationError(f"window length must satisfy 0 <= T <= n, got {T}")
    return _report(Metric.D2, "uniform_points.d2", [6.0 * T / (n - 1)], labels=["window"])


# ---------------------------------------------------------------------------
# Thinning
# ---------------------------------------------------------------------------

def bound_thinning(moments: ComponentMoments, p: float, metric, model: Optional[CountModel] = None,
                   replicates: int = 10_000, stream: Optional[SeededStream] = None) -> BoundReport:
    """Bounds for the p-thinned superposition; all three are linear in p.

    dtv and dTV are closed form in the moments. d2 keeps the random factor
    3.5/lambda + 2.5/(|sum_{j outside A_i} Xi_j| + 1) inside the expectation and
    needs joint count draws from the base model.
    """
    metric = _metric(metric)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"retention probability must lie in [0, 1], got {p}")
    lam_i = moments.lambdas
    lam = moments.total
    formula_id = f"thinning.{metric.value}"
    if lam == 0 or p == 0:
        return _zero(metric, formula_id, lam_i.size)

    inner = (moments.mean_v + lam_i) * lam_i + moments.mean_vx + moments.second - lam_i
    if metric is Metric.COUNT_TV:
        return _report(metric, formula_id, p * min(1.0, 1.0 / lam) * inner)
    if metric is Metric.PROCESS_TV:
        return _report(metric, formula_id, p * inner)

    if model is None or stream is None:
        raise ModelError("thinned d2 bound needs the base model and a random stream")
    if replicates < 1:
        raise ValidationError("replicates must be at least 1")
    counts = np.asarray(model.draw_counts(stream.spawn("thinning", "d2").generator(), replicates), dtype=float)
    A = model.neighbourhoods
    n = counts.shape[1]
    psi = np.zeros((replicates, n))
    for i in range(n):
        x = counts[:, i]
        v = counts[:, sorted(A[i] - {i})].sum(axis=1)
        rest = counts[:, [j for j in range(n) if j not in A[i]]].sum(axis=1)
        psi[:, i] = p * (STEIN_UNIFORM / lam + STEIN_NONUNIFORM / (rest + 1.0)) * ((v + x) * lam_i[i] + (v + x - 1.0) * x)
    return _report(metric, formula_id, psi.mean(axis=0), stderr=_stderr(psi.sum(axis=1)))


# ---------------------------------------------------------------------------
# Renewal superpositions
# ---------------------------------------------------------------------------

def bound_renewal(specs: Sequence[RenewalSpec], variant: str = "general", p: float = 1.0) -> BoundReport:
    """d2 bound for independent sparse renewal processes on [0, T].

    The (1 - F_i(T))^2 factor is applied per summand. "iid" uses the
    stationary identical-components form 6n[2F+G]/((n-1)(1-F)^2); "thinned"
    multiplies the general form by the retention probability p.
    """
    if variant not in ("general", "iid", "thinned"):
        raise ValidationError(f"unknown renewal variant {variant!r}")
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"retention probability must lie in [0, 1], got {p}")
    n = len(specs)
    if n < 2:
        raise ValidationError(f"renewal bound needs at least two processes, got {n}")
    F = np.array([spec.F_T for spec in specs])
    G = np.array([spec.G_T for spec in specs])
    if np.any(F >= 1.0):
        raise ValidationError("F_i(T) = 1: bound denominators vanish")

    if variant == "iid":
        if not (np.allclose(F, F[0], rtol=1e-12, atol=0) and np.allclose(G, G[0], rtol=1e-12, atol=0)):
            raise ValidationError("iid variant needs identical F(T) and G(T) for all processes")
        term = RENEWAL_CONSTANT * (2.0 * F[0] + G[0]) / ((n - 1) * (1.0 - F[0]) ** 2)
        return _report(Metric.D2, "renewal.iid", [term] * n)

    denominator = float(G.sum() - G.max())
    if denominator <= 0:
        raise ValidationError("sum G_i(T) - max G_j(T) must be positive")
    scale = p if variant == "thinned" else 1.0
    terms = scale * RENEWAL_CONSTANT * (2.0 * F + G) * G / (denominator * (1.0 - F) ** 2)
    return _report(Metric.D2, f"renewal.{variant}", terms, interpretation="per-summand")


def bound_schuhmacher_comparison(n: int, F_T: float, G_T: float, theta: float) -> float:
    """Comparison bound n[F(T) + G(T)] + theta G(T)(1 + ln+ n); grows linearly in n."""
    if theta < 0:
        raise ValidationError(f"theta must be non-negative, got {theta}")
    if n < 1:
        raise ValidationError(f"n must be at least 1, got {n}")
    return n * (F_T + G_T) + theta * G_T * (1.0 + max(0.0, math.log(n)))
