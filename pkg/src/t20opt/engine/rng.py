"""Seed derivation and reproducible uniform-draw matrices.

All randomness flows from counter-based Philox streams keyed by explicit
integer seeds. Every evaluation pre-generates an (n_sims, n_balls) matrix
of uniforms in a single call; row i is trajectory i's private substream,
so sharding trajectories across batches or threads cannot change results.
Sub-seeds for optimizer passes are derived from (root seed, stream tags)
through numpy's SeedSequence, which is stable across platforms.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Sequence

import numpy as np

MAX_SEED = 2**63 - 1  # keep derived seeds in the positive int64 range


def derive_seed(root: int, *parts: int) -> int:
    """Deterministically derive a 63-bit sub-seed from a root seed and tags."""
    ss = np.random.SeedSequence([int(root) & MAX_SEED, *(int(p) & MAX_SEED for p in parts)])
    return int(ss.generate_state(1, np.uint64)[0] & MAX_SEED)


def plan_digest(items: Sequence[str] | Iterable[str]) -> int:
    """Stable 63-bit digest of an ordered sequence of player ids."""
    joined = "\x1f".join(items).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(joined, digest_size=8).digest(), "big") & MAX_SEED


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(int(seed) & MAX_SEED)))


def uniform_matrix(seed: int, n_sims: int, n_balls: int) -> np.ndarray:
    """Ball-major uniforms: row k holds every trajectory's draw for ball k.

    Column i is trajectory i's private substream, a fixed function of
    (seed, n_sims, n_balls, i), so results cannot depend on how trajectories
    are batched or threaded. Ball-major layout keeps the per-ball slices the
    simulators consume contiguous.
    """
    return generator(seed).random((n_balls, n_sims))
