"""
Thinning experiment: retain each point of a base superposition with
probability p and check that the bounds and the observed distance to
Po(p lambda) both decay linearly in p.

Fixed bases also get a coupling check: every retained point is paired
with Po(p) points at the same place.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from steinpp.core.bounds import BoundReport, ComponentMoments, Metric, bound_thinning
from steinpp.core.carrier import Configuration, superpose
from steinpp.core.count_dist import binomial_counts, poisson_counts, tv_distance
from steinpp.core.exceptions import ModelError, SteinppError
from steinpp.core.processes import (
    CountModel,
    FixedCountModel,
    IndicatorModel,
    PoissonCoupling,
    coupling_mismatch,
    sample_indicator_process,
    sample_poisson_process,
    thin,
    thin_counts,
)
from steinpp.core.streams import SeededStream

from .base import Experiment, VerificationReport, VerificationRow

logger = logging.getLogger(__name__)


def sample_base(model: CountModel, stream: SeededStream) -> Configuration:
    """One configuration of a built-in base model."""
    if isinstance(model, FixedCountModel):
        return model.sample(stream)
    if isinstance(model, IndicatorModel):
        return sample_indicator_process(model, stream)
    if isinstance(model, PoissonCoupling):
        return superpose(sample_poisson_process(float(lam), None, stream.spawn("component", j))
                         for j, lam in enumerate(model.lambdas))
    raise ModelError(f"no sampler for base model {type(model).__name__}")


def loglog_slope(p: List[float], values: List[float]) -> Optional[float]:
    """Least-squares slope of log(value) against log(p) over positive points."""
    pairs = [(x, y) for x, y in zip(p, values) if x > 0 and y is not None and y > 0]
    if len(pairs) < 2 or len({x for x, _ in pairs}) < 2:
        return None
    x, y = np.log(np.array(pairs)).T
    return float(np.polyfit(x, y, 1)[0])


class ThinningExperiment(Experiment):

    def __init__(self, config, settings=None):
        super().__init__(config, settings)
        self.model: CountModel = self.params.base.build_count_model()
        self._moments: Optional[ComponentMoments] = None

    @property
    def moments(self) -> ComponentMoments:
        if self._moments is None:
            try:
                self._moments = ComponentMoments.exact(self.model)
            except ModelError:
                logger.info(f"Estimating base moments from {self.params.moment_replicates} draws")
                self._moments = ComponentMoments.estimate(self.model, self.params.moment_replicates,
                                                          self.stream.spawn("moments"))
        return self._moments

    def bound(self, p: float, metric: Metric) -> Tuple[Optional[BoundReport], Optional[str]]:
        try:
            return bound_thinning(self.moments, p, metric, model=self.model,
                                  replicates=self.params.moment_replicates,
                                  stream=self.stream.spawn("bound", p)), None
        except SteinppError as e:
            return None, str(e)

    def bounds(self) -> List[BoundReport]:
        reports = [self.bound(p, metric)[0] for p in self.params.retention for metric in self.config.metrics]
        return [b for b in reports if b is not None]

    def _coupling_draw(self, p: float):
        """Each retained base point against Po(p) points at the same place."""
        model = self.model
        positions = model.positions if model.positions is not None else np.arange(model.counts.size)
        sites = np.repeat(positions, model.counts)
        probs = np.full(sites.size, p)

        def draw(rng: np.random.Generator, size: int) -> np.ndarray:
            return coupling_mismatch(probs, sites, size, rng)
        return draw

    def sample(self, stream: SeededStream) -> Configuration:
        return thin(sample_base(self.model, stream.spawn("base")), self.params.retention[0], stream.spawn("thin"))

    def run(self) -> VerificationReport:
        lam = self.moments.total
        model = self.model
        logger.info(f"Verifying thinning of a {type(model).__name__} base with lambda={lam:.6g} "
                    f"at retention {self.params.retention}")

        rows: List[VerificationRow] = []
        bound_values: Dict[str, List[Optional[float]]] = {m.value: [] for m in self.config.metrics}
        distances: List[float] = []
        for p in self.params.retention:
            def draw(rng: np.random.Generator, size: int, p=p) -> np.ndarray:
                return thin_counts(model.draw_counts(rng, size).sum(axis=1), p, rng)

            totals = self.simulate_totals(draw, f"p={p}")
            tv, halfwidth = self.empirical_tv(totals, p * lam, f"p={p}")
            distances.append(tv)

            exact = None
            if isinstance(model, FixedCountModel):
                exact = tv_distance(binomial_counts(int(model.counts.sum()), p), poisson_counts(p * lam)).value

            for metric in self.config.metrics:
                bound, reason = self.bound(p, metric)
                bound_values[metric.value].append(bound.value if bound is not None else None)
                if exact is not None:
                    rows.append(self.compare(metric, f"p={p},exact", exact, bound, exact=True, note=reason))
                rows.append(self.compare(metric, f"p={p}", tv, bound, halfwidth=halfwidth, note=reason))

            if exact is not None and Metric.PROCESS_TV in self.config.metrics:
                rows.append(self.check_coupling(f"p={p},coupling", exact, self._coupling_draw(p), f"p={p}"))

        details = {
            "lambda": lam,
            "retention": list(self.params.retention),
            "bound_slopes": {name: loglog_slope(self.params.retention, values)
                             for name, values in bound_values.items()},
            "distance_slope": loglog_slope(self.params.retention, distances),
        }
        return self.report(rows, details)


def verify_thinning(cfg, settings=None) -> VerificationReport:
    return ThinningExperiment(cfg, settings).run()
