"""
Carrier space and point configurations.

The carrier is the unit interval with d0(x, y) = |x - y|. A configuration is a
finite integer-valued measure on it, stored canonically as atoms sorted by
position with positive multiplicities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, List, NewType, Sequence, Tuple, Union

import numpy as np

from .exceptions import ValidationError

CarrierPoint = NewType("CarrierPoint", float)

# Samplers round positions to this many decimals so that equal positions
# compare equal after canonicalization.
POSITION_DECIMALS = 12

Atom = Tuple[float, int]


def as_carrier_point(x: float) -> CarrierPoint:
    """Validate a position on the carrier [0, 1]."""
    value = float(x)
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"carrier position must lie in [0, 1], got {value}")
    return CarrierPoint(value)


def rescale(times: Union[np.ndarray, Sequence[float]], horizon: float) -> np.ndarray:
    """Map points of [0, horizon] onto the carrier with t -> t / horizon."""
    if horizon <= 0:
        raise ValidationError(f"horizon must be positive, got {horizon}")
    scaled = np.asarray(times, dtype=float) / horizon
    return np.round(np.clip(scaled, 0.0, 1.0), POSITION_DECIMALS)


@dataclass(frozen=True)
class Configuration:
    """Finite point configuration on [0, 1] in canonical form."""

    atoms: Tuple[Atom, ...] = ()

    def __post_init__(self):
        merged = {}
        for position, multiplicity in self.atoms:
            x = as_carrier_point(position)
            if int(multiplicity) != multiplicity or multiplicity < 1:
                raise ValidationError(f"multiplicity must be a positive integer, got {multiplicity}")
            merged[x] = merged.get(x, 0) + int(multiplicity)
        object.__setattr__(self, "atoms", tuple(sorted(merged.items())))

    @classmethod
    def empty(cls) -> "Configuration":
        return cls(())

    @classmethod
    def from_atoms(cls, atoms: Iterable[Sequence[float]]) -> "Configuration":
        return cls(tuple((float(a[0]), int(a[1])) for a in atoms))

    @classmethod
    def from_points(cls, points: Union[np.ndarray, Sequence[float]]) -> "Configuration":
        """Build a configuration from a list of points, repeated points merged."""
        values = np.asarray(points, dtype=float)
        if values.size == 0:
            return cls.empty()
        positions, counts = np.unique(values, return_counts=True)
        return cls(tuple(zip(positions.tolist(), counts.tolist())))

    @property
    def total_mass(self) -> int:
        return sum(m for _, m in self.atoms)

    @property
    def positions(self) -> np.ndarray:
        return np.array([x for x, _ in self.atoms], dtype=float)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.atoms], dtype=int)

    def points(self) -> np.ndarray:
        """Expand to a sorted point list, each atom repeated by its multiplicity."""
        if not self.atoms:
            return np.empty(0, dtype=float)
        return np.repeat(self.positions, self.multiplicities)

    def to_list(self) -> List[List[Union[float, int]]]:
        return [[x, m] for x, m in self.atoms]

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValidationError("configuration JSON must be an array of [position, multiplicity] pairs")
        try:
            return cls.from_atoms(data)
        except (TypeError, IndexError) as e:
            raise ValidationError(f"malformed configuration JSON: {e}")

    def __len__(self) -> int:
        return len(self.atoms)


def total_mass(c: Configuration) -> int:
    """Total number of points |xi|."""
    return c.total_mass


def superpose(cs: Iterable[Configuration]) -> Configuration:
    """Atom-wise sum of configurations."""
    atoms: List[Atom] = []
    for c in cs:
        atoms.extend(c.atoms)
    return Configuration(tuple(atoms))


def minimum(a: Configuration, b: Configuration) -> Configuration:
    """Atom-wise minimum a ∧ b over the joint support."""
    other = dict(b.atoms)
    return Configuration(tuple(
        (x, min(m, other[x])) for x, m in a.atoms if x in other
    ))


def variation_norm_diff(a: Configuration, b: Configuration) -> int:
    """Variation norm ||a - b|| = (|a| - |a ∧ b|) + (|b| - |a ∧ b|)."""
    common = minimum(a, b).total_mass
    return (a.total_mass - common) + (b.total_mass - common)
