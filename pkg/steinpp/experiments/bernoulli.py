"""
Bernoulli process experiment: independent indicators at positions i/n.

dtv between the process law and Po(lambda) depends on counts only, so the
exact Poisson-binomial law gives it exactly; the same number is a lower
witness for d2 and dTV. A site-wise coupling with the Poisson process
checks it against a simulated upper estimate of dTV as well.
"""

import logging
from typing import List

import numpy as np

from steinpp.core.bounds import BoundReport, Metric, bound_bernoulli
from steinpp.core.carrier import Configuration
from steinpp.core.count_dist import poisson_binomial_counts, poisson_counts, tv_distance
from steinpp.core.exceptions import ValidationError
from steinpp.core.processes import IndicatorModel, coupling_mismatch, sample_bernoulli_process
from steinpp.core.streams import SeededStream

from .base import Experiment, VerificationReport, VerificationRow

logger = logging.getLogger(__name__)


class BernoulliExperiment(Experiment):

    @property
    def model(self) -> IndicatorModel:
        return IndicatorModel.independent(self.params.p)

    def _bound(self, metric: Metric):
        try:
            return bound_bernoulli(self.params.p, metric), None
        except ValidationError as e:
            return None, str(e)

    def bounds(self) -> List[BoundReport]:
        return [b for b, _ in (self._bound(m) for m in self.config.metrics) if b is not None]

    def sample(self, stream: SeededStream) -> Configuration:
        return sample_bernoulli_process(self.model, stream)

    def run(self) -> VerificationReport:
        p = np.asarray(self.params.p, dtype=float)
        lam = float(p.sum())
        logger.info(f"Verifying Bernoulli process with n={p.size}, lambda={lam:.6g}")
        exact = tv_distance(poisson_binomial_counts(p), poisson_counts(lam))

        model = self.model
        totals = self.simulate_totals(lambda rng, size: model.draw_counts(rng, size).sum(axis=1), "bernoulli")
        simulated, halfwidth = self.empirical_tv(totals, lam, "bernoulli")

        rows: List[VerificationRow] = []
        for metric in self.config.metrics:
            bound, reason = self._bound(metric)
            rows.append(self.compare(metric, "exact", exact.value, bound, exact=True, note=reason))
            if metric is Metric.D2:
                rows.append(self.compare(metric, "simulated", simulated, bound, halfwidth=halfwidth,
                                         note=reason or "empirical count-TV as lower witness"))
            if metric is Metric.PROCESS_TV:
                positions = model.positions if model.positions is not None else np.arange(p.size)
                rows.append(self.check_coupling(
                    "coupling", exact.value,
                    lambda rng, size: coupling_mismatch(p, positions, size, rng), "bernoulli"))
        return self.report(rows, {"lambda": lam, "exact_tv": exact.value, "tail_error": exact.error_bar})


def verify_bernoulli(cfg, settings=None) -> VerificationReport:
    return BernoulliExperiment(cfg, settings).run()
