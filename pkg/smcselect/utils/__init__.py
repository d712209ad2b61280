"""Shared utility helpers for smcselect."""

from typing import Iterator, List, Union

import numpy as np

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Return a numpy Generator for an int, SeedSequence or existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn_seeds(master_seed: int, count: int) -> List[np.random.SeedSequence]:
    """Derive ``count`` independent child seed sequences from one master seed.

    Children depend only on ``(master_seed, index)``, never on how many
    workers later consume them.
    """
    return np.random.SeedSequence(master_seed).spawn(count)


def all_states(d: int) -> np.ndarray:
    """Every vector of B^d as rows of a ``(2**d, d)`` uint8 matrix.

    Row ``k`` holds the binary digits of ``k``, least significant bit in
    column 0.
    """
    codes = np.arange(2**d, dtype=np.int64)[:, None]
    return ((codes >> np.arange(d, dtype=np.int64)) & 1).astype(np.uint8)


def iter_state_blocks(d: int, block: int = 1 << 14) -> Iterator[np.ndarray]:
    """Yield B^d in blocks of at most ``block`` rows, in the order of ``all_states``."""
    total = 2**d
    shifts = np.arange(d, dtype=np.int64)
    for start in range(0, total, block):
        codes = np.arange(start, min(start + block, total), dtype=np.int64)[:, None]
        yield ((codes >> shifts) & 1).astype(np.uint8)


def row_keys(X: np.ndarray) -> List[bytes]:
    """Hashable byte keys, one per row of a binary matrix."""
    packed = np.packbits(np.ascontiguousarray(X, dtype=np.uint8), axis=1)
    return [row.tobytes() for row in packed]
