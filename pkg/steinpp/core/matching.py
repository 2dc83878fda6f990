"""
Matching distances between configurations.

d1' matches every point of the smaller configuration into the larger one at
d0 cost and charges 1 per unmatched point; d1 is 1 on unequal masses and the
mean perfect-matching cost otherwise.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .carrier import Configuration


@dataclass(frozen=True)
class MatchingResult:
    """Minimum-cost injection of the smaller point list into the larger one."""
    cost: float
    assignment: Tuple[Tuple[int, int], ...]
    unmatched: int

    @property
    def d1_prime(self) -> float:
        return self.cost + self.unmatched


def match(a: Configuration, b: Configuration) -> MatchingResult:
    """Exact minimum-cost matching of the expanded point lists of a and b.

    Indices in the assignment refer to the expanded, sorted point lists of the
    smaller and the larger configuration, in that order.
    """
    small, large = a.points(), b.points()
    if small.size > large.size:
        small, large = large, small
    n, m = small.size, large.size
    if n == 0:
        return MatchingResult(cost=0.0, assignment=(), unmatched=m)

    if n == m:
        # On the line, matching sorted lists is optimal for |x - y| costs.
        pairs = tuple((i, i) for i in range(n))
        cost = float(np.abs(small - large).sum())
        return MatchingResult(cost=cost, assignment=pairs, unmatched=0)

    cost_matrix = np.abs(small[:, None] - large[None, :])
    rows, cols = linear_sum_assignment(cost_matrix)
    cost = float(cost_matrix[rows, cols].sum())
    pairs = tuple((int(r), int(c)) for r, c in zip(rows, cols))
    return MatchingResult(cost=cost, assignment=pairs, unmatched=m - n)


def d1_prime(a: Configuration, b: Configuration) -> float:
    return match(a, b).d1_prime


def d1(a: Configuration, b: Configuration) -> float:
    n, m = a.total_mass, b.total_mass
    if n == 0 and m == 0:
        return 0.0
    if n != m:
        return 1.0
    return match(a, b).cost / n
