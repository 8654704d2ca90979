"""Deterministic random-stream derivation.

Every stochastic operation in the library draws from a numpy ``Generator``
derived from a user seed plus a fixed context path, so results reproduce
run-to-run and unrelated operations never share a stream even when they
share a seed. The mapping (seed, path) -> stream is stable within a
release.
"""

from __future__ import annotations

import numpy as np

# Context tags; one per independent consumer of randomness.
CTX_SEARCH_TRIAL = 1
CTX_SPLIT_CLASS = 2
CTX_SYNTH_LABELS = 3
CTX_SYNTH_MASK = 4
CTX_SYNTH_WRONG = 5
CTX_GROUP_MASK = 6
CTX_PAIR_MASK = 7
CTX_PAIR_WRONG = 8

_U64 = 2**64


def normalize_seed(seed: int) -> int:
    """Map any Python int (negatives included) onto [0, 2^64)."""
    return int(seed) % _U64


def derive_rng(seed: int, *path: int) -> np.random.Generator:
    """Generator that is a pure function of (seed, path)."""
    entropy = [normalize_seed(seed)] + [normalize_seed(p) for p in path]
    return np.random.default_rng(np.random.SeedSequence(entropy))
