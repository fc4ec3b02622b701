"""Seeded, chunked random streams.

Trials are split into fixed-size chunks; chunk ``c`` always draws from
``Philox(SeedSequence(seed, spawn_key=(c,)))``, so estimates depend only on the
seed and trial count, never on how chunks are scheduled.
"""
from __future__ import annotations

import os

import numpy as np

CHUNK = 10_000


def generator(seed: int, chunk: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def chunked_generators(seed: int, trials: int, chunk: int = CHUNK):
    """Yield ``(rng, size)`` pairs covering ``trials`` trials."""
    c = 0
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        yield generator(seed, c), size
        done += size
        c += 1


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("SKEWSIP_THREADS", "1")))
    except ValueError:
        return 1
