"""Deterministic per-sentence RNG streams.

Every random draw in the pipeline flows from a single global seed; each
sentence (and each named sub-stream) gets its own generator derived by
stable hashing, so results do not depend on scheduling order.
"""

import hashlib

import numpy as np

__all__ = ["derive_rng", "as_rng"]


def derive_rng(seed: int, *keys) -> np.random.Generator:
    """Generator for the stream identified by (seed, *keys).

    Keys are stringified, so any hashable identifiers (sentence ids,
    strategy names, draw ordinals) work.
    """
    material = "|".join([str(seed), *map(str, keys)])
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return np.random.default_rng(int.from_bytes(digest[:16], "little"))


def as_rng(seed_or_rng) -> np.random.Generator:
    """Accept an int seed, a Generator, or None (fresh entropy)."""
    return np.random.default_rng(seed_or_rng)
