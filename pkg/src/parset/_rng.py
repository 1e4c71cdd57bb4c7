"""Deterministic counter-based sampling streams.

Every Monte Carlo draw goes through a Philox stream keyed by the user seed.
Work is split into fixed-size chunks; chunk k always starts at the same
counter offset, and partial results are combined in chunk order.  Estimates
are therefore bit-identical for a given seed regardless of how many worker
threads execute the chunks.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

CHUNK = 1 << 16
# Counter blocks reserved per chunk slot; far larger than any chunk can consume,
# so streams never overlap.
_CHUNK_STRIDE = 1 << 40

_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *tags) -> int:
    """Stable 64-bit child seed for a (seed, tags) pair."""
    msg = repr((int(seed),) + tuple(tags)).encode()
    return int.from_bytes(hashlib.blake2b(msg, digest_size=8).digest(), "little")


def resolve_workers(workers: int | None = None) -> int:
    """Worker count, with PARSET_WORKERS taking precedence when set."""
    env = os.environ.get("PARSET_WORKERS")
    if env is not None and env.strip():
        return max(1, int(env))
    return max(1, int(workers or 1))


def chunk_generator(seed: int, chunk_index: int) -> np.random.Generator:
    bg = np.random.Philox(key=int(seed) & _MASK64)
    bg.advance(int(chunk_index) * _CHUNK_STRIDE)
    return np.random.Generator(bg)


def single_generator(seed: int) -> np.random.Generator:
    return chunk_generator(seed, 0)


def map_reduce_chunks(
    seed: int,
    total: int,
    workers: int,
    chunk_fn: Callable[[np.random.Generator, int], Sequence],
):
    """Run chunk_fn(gen, n) over all chunks; add the tuples in chunk order."""
    if total < 1:
        raise ValueError("total samples must be >= 1")
    sizes = [CHUNK] * (total // CHUNK)
    if total % CHUNK:
        sizes.append(total % CHUNK)

    def run(k: int):
        return chunk_fn(chunk_generator(seed, k), sizes[k])

    workers = resolve_workers(workers)
    if workers == 1 or len(sizes) == 1:
        parts = [run(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    acc = list(parts[0])
    for part in parts[1:]:
        for i, v in enumerate(part):
            acc[i] = acc[i] + v
    return tuple(acc)


def uniform_in_ball(g: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """n points uniform in the unit L2 ball (direction x radius^(1/d) method)."""
    z = g.standard_normal((n, dim))
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    radii = g.random(n) ** (1.0 / dim)
    return z / norms * radii[:, None]


def uniform_in_cube(g: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """n points uniform in [-1, 1]^dim."""
    return g.random((n, dim)) * 2.0 - 1.0
