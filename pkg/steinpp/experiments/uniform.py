"""
Uniform points restricted to a window: the window count is Binomial(n, T/n).
"""

import logging
from typing import List

from steinpp.core.bounds import BoundReport, Metric, bound_uniform_points
from steinpp.core.carrier import Configuration
from steinpp.core.count_dist import binomial_counts, poisson_counts, tv_distance
from steinpp.core.processes import sample_uniform_points_restriction
from steinpp.core.streams import SeededStream

from .base import Experiment, VerificationReport

logger = logging.getLogger(__name__)


class UniformPointsExperiment(Experiment):

    def bounds(self) -> List[BoundReport]:
        if self.params.n < 2:
            return []
        return [bound_uniform_points(self.params.n, self.params.T)]

    def sample(self, stream: SeededStream) -> Configuration:
        return sample_uniform_points_restriction(self.params.n, self.params.T, stream)

    def run(self) -> VerificationReport:
        n, T = self.params.n, self.params.T
        logger.info(f"Verifying uniform points with n={n}, T={T}")
        exact = tv_distance(binomial_counts(n, T / n), poisson_counts(T))
        bounds = self.bounds()
        bound = bounds[0] if bounds else None

        rows = []
        for metric in self.config.metrics:
            if metric is not Metric.D2:
                rows.append(self.compare(metric, f"n={n},T={T}", exact.value, None,
                                         note="no closed-form bound for this metric"))
                continue
            note = None if bound is not None else "bound needs n >= 2"
            rows.append(self.compare(metric, f"n={n},T={T}", exact.value, bound, exact=True, note=note))

        details = {"exact_tv": exact.value}
        if bound is not None and bound.value > 0:
            details["tightness_ratio"] = exact.value / bound.value
        return self.report(rows, details)


def verify_uniform(cfg, settings=None) -> VerificationReport:
    return UniformPointsExperiment(cfg, settings).run()
