"""
Base experiment system for steinpp.
Defines the interface every verification experiment implements and the
report it produces.
"""

import logging
from abc import ABC, abstractmethod
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field
from scipy import stats

from steinpp.core.bounds import BoundReport, Metric
from steinpp.core.carrier import Configuration
from steinpp.core.config.schema import ExperimentConfig
from steinpp.core.config.settings import SteinppSettings
from steinpp.core.count_dist import CountDistribution, empirical_counts, poisson_counts, tv_distance
from steinpp.core.exceptions import VerificationError
from steinpp.core.parallel import run_chunked
from steinpp.core.streams import SeededStream

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-9


class VerificationStatus(str, Enum):
    SATISFIED = "satisfied"
    INCONCLUSIVE = "inconclusive"
    FAILED = "failed"
    SKIPPED = "skipped"


class VerificationRow(BaseModel):
    """One (parameter point, metric) comparison of a distance with a bound."""
    metric: Metric
    param: str
    distance: Optional[float] = None
    halfwidth: float = 0.0
    bound: Optional[float] = None
    bound_stderr: Optional[float] = None
    formula_id: Optional[str] = None
    satisfied: Optional[bool] = None
    margin: Optional[float] = None
    status: VerificationStatus
    note: Optional[str] = None


class VerificationReport(BaseModel):
    experiment: str
    seed: int
    rows: List[VerificationRow] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(row.status is VerificationStatus.FAILED for row in self.rows)

    @property
    def exit_code(self) -> int:
        return 2 if self.failed else 0

    def raise_for_failures(self) -> None:
        failed = [f"{row.metric.value}@{row.param}" for row in self.rows if row.status is VerificationStatus.FAILED]
        if failed:
            raise VerificationError(f"{self.experiment}: bound violated for {', '.join(failed)}")

    def to_frame(self) -> pd.DataFrame:
        columns = ["param", "metric", "distance", "halfwidth", "bound", "satisfied", "margin", "status"]
        records = [{
            "param": row.param,
            "metric": row.metric.value,
            "distance": row.distance,
            "halfwidth": row.halfwidth,
            "bound": row.bound,
            "satisfied": row.satisfied,
            "margin": row.margin,
            "status": row.status.value,
        } for row in self.rows]
        return pd.DataFrame.from_records(records, columns=columns)

    def write(self, output_dir: Union[str, Path]) -> Path:
        """Write report.json and tables/<experiment>.csv."""
        out = Path(output_dir)
        (out / "tables").mkdir(parents=True, exist_ok=True)
        report_path = out / "report.json"
        report_path.write_text(self.model_dump_json(indent=2) + "\n")
        self.to_frame().to_csv(out / "tables" / f"{self.experiment}.csv", index=False, float_format="%.17g")
        logger.info(f"Wrote {report_path}")
        return report_path


def compare(metric: Metric, param: str, distance: float, bound: Optional[BoundReport], *,
            halfwidth: float = 0.0, exact: bool = False, bound_sigmas: float = 3.0,
            inconclusive_factor: float = 2.0, note: Optional[str] = None) -> VerificationRow:
    """Compare a distance (or its estimate) with a bound.

    Exact distances must not exceed the bound beyond EXACT_TOLERANCE.
    Estimated distances pass when distance - halfwidth <= bound + k sigma.
    A failure smaller than inconclusive_factor times the noise is inconclusive.
    """
    if bound is None:
        return VerificationRow(metric=metric, param=param, distance=distance, halfwidth=halfwidth,
                               status=VerificationStatus.SKIPPED, note=note)
    stderr = bound.mc_stderr or 0.0
    slack = EXACT_TOLERANCE if exact else halfwidth + bound_sigmas * stderr
    margin = bound.value + slack - distance
    row = dict(metric=metric, param=param, distance=distance, halfwidth=halfwidth, bound=bound.value,
               bound_stderr=bound.mc_stderr, formula_id=bound.formula_id, margin=margin)
    if bound.vacuous:
        return VerificationRow(**row, satisfied=True, status=VerificationStatus.SKIPPED,
                               note=note or "vacuous bound (> 1), comparison not informative")
    if margin >= 0:
        return VerificationRow(**row, satisfied=True, status=VerificationStatus.SATISFIED, note=note)
    noise = 0.0 if exact else halfwidth + bound_sigmas * stderr
    if noise > 0 and -margin < inconclusive_factor * noise:
        logger.warning(f"Inconclusive {metric.value} check at {param}: margin {margin:.3g} within noise")
        return VerificationRow(**row, satisfied=False, status=VerificationStatus.INCONCLUSIVE, note=note)
    logger.error(f"Bound violated for {metric.value} at {param}: distance {distance:.6g} > bound {bound.value:.6g}")
    return VerificationRow(**row, satisfied=False, status=VerificationStatus.FAILED, note=note)


def coupling_row(param: str, count_tv: float, differ: np.ndarray, *, confidence: float = 0.99,
                 inconclusive_factor: float = 2.0) -> VerificationRow:
    """Check count-law TV against the mismatch rate of a coupling.

    For any coupling (X, Y) of the process and its Poisson counterpart,
    P(X != Y) >= dTV >= count-law TV. The mismatch rate is widened by its
    one-sided Clopper-Pearson margin at `confidence`.
    """
    flags = np.asarray(differ, dtype=bool).ravel()
    trials, hits = flags.size, int(flags.sum())
    if trials == 0:
        raise VerificationError("coupling check needs at least one replicate")
    rate = hits / trials
    upper = 1.0 if hits == trials else float(stats.beta.ppf(confidence, hits + 1, trials - hits))
    halfwidth = upper - rate
    margin = upper - count_tv
    row = dict(metric=Metric.PROCESS_TV, param=param, distance=count_tv, halfwidth=halfwidth,
               bound=rate, formula_id="coupling", margin=margin,
               note=f"count-law TV against coupling estimate of dTV over {trials} replicates")
    if margin >= -EXACT_TOLERANCE:
        return VerificationRow(**row, satisfied=True, status=VerificationStatus.SATISFIED)
    if -margin < inconclusive_factor * halfwidth:
        logger.warning(f"Inconclusive coupling check at {param}: margin {margin:.3g} within noise")
        return VerificationRow(**row, satisfied=False, status=VerificationStatus.INCONCLUSIVE)
    logger.error(f"Coupling check failed at {param}: count TV {count_tv:.6g} > mismatch rate {rate:.6g}")
    return VerificationRow(**row, satisfied=False, status=VerificationStatus.FAILED)


class Experiment(ABC):
    """Base class for all verification experiments"""

    def __init__(self, config: ExperimentConfig, settings: Optional[SteinppSettings] = None):
        self.config = config
        self.settings = settings or SteinppSettings()
        self.params = config.typed_params()

    @property
    def name(self) -> str:
        return self.config.experiment.value

    @property
    def stream(self) -> SeededStream:
        return SeededStream(self.config.seed).spawn(self.name)

    @abstractmethod
    def bounds(self) -> List[BoundReport]:
        """Evaluate the bounds this experiment checks."""
        pass

    @abstractmethod
    def sample(self, stream: SeededStream) -> Configuration:
        """Draw one configuration of the process under study."""
        pass

    @abstractmethod
    def run(self) -> VerificationReport:
        """Run the verification experiment"""
        pass

    def simulate_totals(self, draw, key: str) -> np.ndarray:
        """Total counts over config.replicates draws, chunked for reproducibility."""
        return run_chunked(draw, self.config.replicates, self.stream.spawn("counts", key),
                           chunk_size=self.settings.chunk_size, threads=self.settings.threads)

    def empirical_tv(self, totals: np.ndarray, lam: float, key: str):
        """TV between the empirical count law and Po(lam), with bootstrap half-width."""
        empirical: CountDistribution = empirical_counts(totals)
        tv = tv_distance(empirical, poisson_counts(lam))
        options = self.config.verification
        halfwidth = empirical.tv_halfwidth(self.stream.spawn("bootstrap", key),
                                           resamples=options.bootstrap_resamples,
                                           quantile=options.bootstrap_quantile)
        return tv.value, halfwidth + tv.error_bar

    def compare(self, metric: Metric, param: str, distance: float, bound: Optional[BoundReport],
                **kwargs) -> VerificationRow:
        options = self.config.verification
        return compare(metric, param, distance, bound, bound_sigmas=options.bound_sigmas,
                       inconclusive_factor=options.inconclusive_factor, **kwargs)

    def check_coupling(self, param: str, count_tv: float, draw, key: str) -> VerificationRow:
        """Simulate mismatch flags of a coupling and check count-law TV against them."""
        differ = run_chunked(draw, self.config.replicates, self.stream.spawn("coupling", key),
                             chunk_size=self.settings.chunk_size, threads=self.settings.threads)
        options = self.config.verification
        return coupling_row(param, count_tv, differ, confidence=options.bootstrap_quantile,
                            inconclusive_factor=options.inconclusive_factor)

    def report(self, rows: List[VerificationRow], details: Optional[Dict[str, Any]] = None) -> VerificationReport:
        report = VerificationReport(experiment=self.name, seed=self.config.seed, rows=rows,
                                    details=details or {})
        counts = {status.value: sum(row.status is status for row in rows) for status in VerificationStatus}
        logger.info(f"Experiment {self.name} finished: {counts}")
        return report
