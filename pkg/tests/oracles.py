"""
Brute-force reference implementations used by the tests.
"""

import itertools
import math

import numpy as np

from steinpp.core.carrier import Configuration


def brute_d1_prime(a: Configuration, b: Configuration) -> float:
    """Minimum over all injections of the smaller point list into the larger one."""
    small, large = a.points(), b.points()
    if small.size > large.size:
        small, large = large, small
    if small.size == 0:
        return float(large.size)
    best = math.inf
    for image in itertools.permutations(range(large.size), small.size):
        best = min(best, float(np.abs(small - large[list(image)]).sum()))
    return best + (large.size - small.size)


def brute_d1(a: Configuration, b: Configuration) -> float:
    n, m = a.total_mass, b.total_mass
    if n == 0 and m == 0:
        return 0.0
    if n != m:
        return 1.0
    return brute_d1_prime(a, b) / n


def brute_poisson_binomial(p) -> np.ndarray:
    """pmf of a sum of independent indicators by enumerating all outcomes."""
    p = list(p)
    pmf = np.zeros(len(p) + 1)
    for outcome in itertools.product((0, 1), repeat=len(p)):
        weight = 1.0
        for on, q in zip(outcome, p):
            weight *= q if on else 1.0 - q
        pmf[sum(outcome)] += weight
    return pmf


def random_configuration(rng: np.random.Generator, max_points: int, decimals: int = 2) -> Configuration:
    """Random configuration; coarse rounding produces coincident points."""
    size = int(rng.integers(0, max_points + 1))
    return Configuration.from_points(np.round(rng.random(size), decimals))
