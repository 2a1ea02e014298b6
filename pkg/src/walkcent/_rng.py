"""Counter-based random streams.

All randomness in the package flows through Philox generators keyed by
``(seed, purpose tag, stream index)``.  Streams are independent of each
other and of evaluation order, so sketch rows can be generated in any
batching (or in parallel) with identical results, and every algorithm is
exactly reproducible from its seed.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

__all__ = [
    "TAG_PROJECTION",
    "TAG_HK",
    "TAG_DELTA_EDGE",
    "TAG_DELTA_BOUNDARY",
    "TAG_WALK",
    "TAG_BASELINE",
    "check_seed",
    "stream",
    "sign_block",
    "child_seed",
]

TAG_PROJECTION = 0
TAG_HK = 1
TAG_DELTA_EDGE = 2
TAG_DELTA_BOUNDARY = 3
TAG_WALK = 4
TAG_BASELINE = 5

_MASK64 = (1 << 64) - 1


def check_seed(seed) -> int:
    if not isinstance(seed, (int, np.integer)):
        raise ValidationError(f"seed must be an integer, got {seed!r}")
    return int(seed) & _MASK64


def stream(seed: int, tag: int, index: int = 0) -> np.random.Generator:
    """Independent generator for stream ``index`` of purpose ``tag``."""
    seed = check_seed(seed)
    key = np.array([seed, ((tag & 0xFFFF) << 48) ^ (index & _MASK64)],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sign_block(seed: int, tag: int, first_row: int, n_rows: int,
               length: int) -> np.ndarray:
    """Rademacher rows ``first_row .. first_row + n_rows - 1`` as columns.

    Returns a ``(length, n_rows)`` float64 array of +-1 entries; column
    ``j`` is drawn from the stream of row ``first_row + j``.
    """
    out = np.empty((length, n_rows), dtype=np.float64)
    for j in range(n_rows):
        rng = stream(seed, tag, first_row + j)
        out[:, j] = rng.integers(0, 2, size=length).astype(np.float64)
    out *= 2.0
    out -= 1.0
    return out


def child_seed(seed: int, step: int) -> int:
    """Deterministic per-step seed for multi-round algorithms."""
    ss = np.random.SeedSequence(entropy=check_seed(seed),
                                spawn_key=(int(step),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
