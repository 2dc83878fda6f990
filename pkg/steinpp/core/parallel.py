"""
Chunked replicate execution.

Work is split into chunks of a fixed size, each chunk drawing from its own
child stream, and results are concatenated in chunk order. Outputs therefore
depend on the chunk size but never on the number of threads.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List

import numpy as np

from .exceptions import ValidationError
from .streams import SeededStream

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 4096

ChunkFn = Callable[[np.random.Generator, int], np.ndarray]


def chunk_sizes(total: int, chunk_size: int) -> List[int]:
    if total < 0 or chunk_size < 1:
        raise ValidationError(f"invalid chunking total={total}, chunk_size={chunk_size}")
    full, last = divmod(total, chunk_size)
    return [chunk_size] * full + ([last] if last else [])


def run_chunked(fn: ChunkFn, total: int, stream: SeededStream, *,
                chunk_size: int = DEFAULT_CHUNK_SIZE, threads: int = 1) -> np.ndarray:
    """Run fn(rng, n) over chunks summing to `total` and stack the results row-wise."""
    sizes = chunk_sizes(total, chunk_size)
    if not sizes:
        return np.asarray(fn(stream.spawn("chunk", 0).generator(), 0))

    def work(index: int) -> np.ndarray:
        return np.asarray(fn(stream.spawn("chunk", index).generator(), sizes[index]))

    if threads <= 1 or len(sizes) == 1:
        results = [work(k) for k in range(len(sizes))]
    else:
        logger.debug(f"Running {len(sizes)} chunks on {threads} threads")
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, range(len(sizes))))
    return np.concatenate(results, axis=0)
