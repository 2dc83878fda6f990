"""
Seeded random streams.

Every sampler is a pure function of its inputs and a SeededStream; child
streams are derived by hashing keys, so replicate streams do not depend on the
order in which they are requested.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError

_MASK64 = (1 << 64) - 1


def _hash_keys(stream_id: int, keys: tuple) -> int:
    digest = hashlib.blake2b(digest_size=8)
    digest.update(str(stream_id).encode())
    for key in keys:
        digest.update(b"\x1f")
        digest.update(repr(key).encode())
    return int.from_bytes(digest.digest(), "little")


@dataclass(frozen=True)
class SeededStream:
    """A reproducible random stream identified by (base_seed, stream_id)."""
    base_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("base_seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= int(value) <= _MASK64:
                raise ValidationError(f"{name} must be an unsigned 64-bit integer, got {value!r}")

    def generator(self) -> np.random.Generator:
        """A fresh generator; identical streams yield identical draw sequences."""
        return np.random.default_rng(np.random.SeedSequence([int(self.base_seed), int(self.stream_id)]))

    def spawn(self, *keys) -> "SeededStream":
        """Child stream for e.g. (experiment id, process index, replicate index)."""
        return SeededStream(self.base_seed, _hash_keys(int(self.stream_id), keys))
