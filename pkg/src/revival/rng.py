"""Counter-based random streams.

Sample ``i`` of a run lives in block ``i // BLOCK_SIZE``; each block draws from
its own Philox stream keyed by ``(seed, block)``. The draws therefore depend
only on the seed and the sample index, never on how blocks are distributed
over workers.
"""

from __future__ import annotations

import numpy as np

BLOCK_SIZE = 8192
DEFAULT_SEED = 20220214


def block_generator(seed: int, block: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def block_ranges(samples: int, block_size: int = BLOCK_SIZE):
    """Yield ``(block, count)`` covering ``samples`` draws in order."""
    for block, start in enumerate(range(0, samples, block_size)):
        yield block, min(block_size, samples - start)


def standard_normals(seed: int, block: int, count: int, width: int) -> np.ndarray:
    """``(count, width)`` standard normal draws for one block."""
    return block_generator(seed, block).standard_normal((count, width))
