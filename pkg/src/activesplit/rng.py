"""Seed derivation and random generator construction.

All randomness in the project flows through numpy's PCG64 generator.
Sub-seeds are derived by hashing a tuple of tokens (master seed, dataset
name, iteration index, role, ...) with SHA-256, so every task owns an
independent stream and results do not depend on execution order.
"""

import hashlib

import numpy as np

SEED_MASK = 2**64 - 1


def derive_seed(*tokens) -> int:
    """Hash a token tuple into a 64-bit seed.

    Tokens may be ints, floats, strings or bools; they are encoded with a
    type tag so that e.g. 1 and "1" produce different seeds.
    """
    h = hashlib.sha256()
    for tok in tokens:
        h.update(f"{type(tok).__name__}:{tok!r}".encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest()[:8], "big") & SEED_MASK


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed."""
    if not 0 <= seed <= SEED_MASK:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))
