"""
Configuration schema validation for steinpp experiments.
"""

import math
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..bounds import Metric
from ..distributions import (Deterministic, Distribution, Empirical, Exponential, Uniform,
                             stationary_delay)
from ..exceptions import ModelError
from ..processes import (CountModel, FixedCountModel, IndicatorCoupling, IndicatorModel,
                         PalmCoupling, PoissonCoupling, RenewalSpec)


class ExperimentKind(str, Enum):
    """Supported verification experiments"""
    BERNOULLI = "bernoulli"
    UNIFORM_POINTS = "uniform_points"
    THINNING = "thinning"
    RENEWAL = "renewal"
    CUSTOM_PALM = "custom_palm"


class DistributionKind(str, Enum):
    EXPONENTIAL = "exponential"
    DETERMINISTIC = "deterministic"
    UNIFORM = "uniform"
    EMPIRICAL = "empirical"
    STATIONARY = "stationary"


class ModelKind(str, Enum):
    """Base process families"""
    FIXED = "fixed"
    POISSON = "poisson"
    INDEPENDENT = "independent"
    BLOCKS = "blocks"
    RUNS = "runs"


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DistributionSpec(StrictModel):
    """Lifetime law; `stationary` derives the delay from the inter-arrival law."""
    kind: DistributionKind
    rate: Optional[float] = Field(default=None, gt=0)
    value: Optional[float] = Field(default=None, ge=0)
    low: Optional[float] = Field(default=None, ge=0)
    high: Optional[float] = Field(default=None, gt=0)
    path: Optional[str] = None
    grid_step: float = Field(default=1e-3, gt=0)
    grid_end: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def check_fields(self) -> "DistributionSpec":
        required = {
            DistributionKind.EXPONENTIAL: ("rate",),
            DistributionKind.DETERMINISTIC: ("value",),
            DistributionKind.UNIFORM: ("low", "high"),
            DistributionKind.EMPIRICAL: ("path",),
            DistributionKind.STATIONARY: (),
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind.value} distribution needs {', '.join(missing)}")
        return self

    def build(self, inter_arrival: Optional[Distribution] = None) -> Distribution:
        if self.kind is DistributionKind.EXPONENTIAL:
            return Exponential(self.rate)
        if self.kind is DistributionKind.DETERMINISTIC:
            return Deterministic(self.value)
        if self.kind is DistributionKind.UNIFORM:
            return Uniform(self.low, self.high)
        if self.kind is DistributionKind.EMPIRICAL:
            return Empirical.from_csv(self.path)
        if inter_arrival is None:
            raise ModelError("stationary delay needs an inter-arrival law")
        end = self.grid_end if self.grid_end is not None else _default_grid_end(inter_arrival)
        steps = max(1, int(math.ceil(end / self.grid_step - 1e-9)))
        return stationary_delay(inter_arrival, np.linspace(0.0, steps * self.grid_step, steps + 1))


def _default_grid_end(F: Distribution) -> float:
    if isinstance(F, Empirical):
        return float(F.grid[-1])
    mean = F.mean
    if not math.isfinite(mean):
        raise ModelError("stationary delay needs an inter-arrival law with finite mean")
    if isinstance(F, (Deterministic, Uniform)):
        return float(F.value if isinstance(F, Deterministic) else F.high)
    return 40.0 * mean


class RenewalProcessSpec(StrictModel):
    F: DistributionSpec
    G: DistributionSpec
    copies: int = Field(default=1, ge=1)

    @field_validator("F")
    @classmethod
    def inter_arrival_not_stationary(cls, v: DistributionSpec) -> DistributionSpec:
        if v.kind is DistributionKind.STATIONARY:
            raise ValueError("inter-arrival law cannot be stationary")
        return v

    def build(self, T: float) -> RenewalSpec:
        F = self.F.build()
        return RenewalSpec(F=F, G=self.G.build(inter_arrival=F), T=T)


class ModelSpec(StrictModel):
    """Base model for thinning and Palm experiments."""
    kind: ModelKind
    counts: Optional[List[int]] = None
    lambdas: Optional[List[float]] = None
    p: Optional[List[float]] = None
    q: Optional[Union[float, List[float]]] = None
    sizes: Optional[List[int]] = None
    n: Optional[int] = Field(default=None, ge=1)
    positions: Union[Literal["grid", "uniform"], List[float]] = "grid"

    @model_validator(mode="after")
    def check_fields(self) -> "ModelSpec":
        required = {
            ModelKind.FIXED: ("counts",),
            ModelKind.POISSON: ("lambdas",),
            ModelKind.INDEPENDENT: ("p",),
            ModelKind.BLOCKS: ("q", "sizes"),
            ModelKind.RUNS: ("q", "n"),
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind.value} model needs {', '.join(missing)}")
        if self.kind is ModelKind.RUNS and not isinstance(self.q, (int, float)):
            raise ValueError("runs model needs a scalar q")
        if self.kind is ModelKind.BLOCKS and not isinstance(self.q, list):
            raise ValueError("blocks model needs one q per block")
        return self

    def build_indicators(self) -> IndicatorModel:
        if self.kind is ModelKind.INDEPENDENT:
            return IndicatorModel.independent(self.p, positions=self.positions)
        if self.kind is ModelKind.BLOCKS:
            return IndicatorModel.blocks(self.q, self.sizes, positions=self.positions)
        if self.kind is ModelKind.RUNS:
            return IndicatorModel.runs(self.n, float(self.q), positions=self.positions)
        raise ModelError(f"{self.kind.value} is not an indicator model")

    def build_count_model(self) -> CountModel:
        if self.kind is ModelKind.FIXED:
            positions = None if self.positions == "uniform" else self.positions
            return FixedCountModel(np.asarray(self.counts), positions=positions)
        if self.kind is ModelKind.POISSON:
            return PoissonCoupling(self.lambdas)
        return self.build_indicators()

    def build_coupling(self) -> PalmCoupling:
        if self.kind is ModelKind.POISSON:
            return PoissonCoupling(self.lambdas)
        if self.kind is ModelKind.FIXED:
            raise ModelError("no built-in Palm coupling for fixed-count models")
        return IndicatorCoupling(self.build_indicators())


class BernoulliParams(StrictModel):
    p: List[float] = Field(default_factory=list)

    @field_validator("p")
    @classmethod
    def probabilities(cls, v: List[float]) -> List[float]:
        if any(not 0.0 <= x <= 1.0 for x in v):
            raise ValueError("probabilities must lie in [0, 1]")
        return v


class UniformPointsParams(StrictModel):
    n: int = Field(..., ge=1)
    T: float = Field(..., ge=0)

    @model_validator(mode="after")
    def window_inside(self) -> "UniformPointsParams":
        if self.T > self.n:
            raise ValueError(f"window length T={self.T} exceeds n={self.n}")
        return self


class ThinningParams(StrictModel):
    base: ModelSpec
    retention: List[float] = Field(default_factory=lambda: [0.5, 0.25, 0.125])
    moment_replicates: int = Field(default=100_000, ge=2)

    @field_validator("retention")
    @classmethod
    def probabilities(cls, v: List[float]) -> List[float]:
        if not v or any(not 0.0 <= x <= 1.0 for x in v):
            raise ValueError("retention probabilities must lie in [0, 1]")
        return v


class RenewalParams(StrictModel):
    T: float = Field(..., gt=0)
    processes: List[RenewalProcessSpec] = Field(..., min_length=1)
    step: float = Field(default=1e-3, gt=0)
    retention: float = Field(default=1.0, ge=0, le=1)
    theta: float = Field(default=1.0, ge=0)
    variant: Literal["auto", "general", "iid"] = "auto"

    @property
    def n(self) -> int:
        return sum(proc.copies for proc in self.processes)

    def build_specs(self) -> List[RenewalSpec]:
        """One spec per process, copies repeated."""
        specs: List[RenewalSpec] = []
        for proc in self.processes:
            spec = proc.build(self.T)
            specs.extend([spec] * proc.copies)
        return specs


class CustomPalmParams(StrictModel):
    model: ModelSpec
    variant: Literal["ld1", "ld2"] = "ld1"
    palm_replicates: int = Field(default=10_000, ge=1)


PARAMS_BY_KIND = {
    ExperimentKind.BERNOULLI: BernoulliParams,
    ExperimentKind.UNIFORM_POINTS: UniformPointsParams,
    ExperimentKind.THINNING: ThinningParams,
    ExperimentKind.RENEWAL: RenewalParams,
    ExperimentKind.CUSTOM_PALM: CustomPalmParams,
}


class VerificationOptions(StrictModel):
    bootstrap_resamples: int = Field(default=1000, ge=1)
    bootstrap_quantile: float = Field(default=0.99, gt=0, lt=1)
    inconclusive_factor: float = Field(default=2.0, ge=0)
    bound_sigmas: float = Field(default=3.0, ge=0)


class ExperimentConfig(StrictModel):
    """Experiment configuration schema"""
    experiment: ExperimentKind
    params: Dict[str, Any] = Field(default_factory=dict)
    metrics: List[Metric] = Field(default_factory=lambda: [Metric.COUNT_TV, Metric.D2, Metric.PROCESS_TV])
    replicates: int = Field(default=100_000, ge=1)
    seed: int = Field(..., ge=0, lt=2 ** 64)
    output_dir: Optional[str] = None
    verification: VerificationOptions = Field(default_factory=VerificationOptions)

    @model_validator(mode="after")
    def check_params(self) -> "ExperimentConfig":
        self.typed_params()
        return self

    def typed_params(self):
        return PARAMS_BY_KIND[self.experiment].model_validate(self.params)
