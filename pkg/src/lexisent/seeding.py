"""Seed derivation shared by every stochastic stage.

A run has one user-facing integer seed. Each stage mixes it with a stable
hash of its name (and any indices), so stages draw independent streams and
adding a stage never perturbs another.
"""

from __future__ import annotations

import hashlib

import numpy as np

DEFAULT_SEED = 20240601


def _name_key(name: str) -> int:
    return int.from_bytes(hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest(), "little")


def seed_sequence(seed: int, *parts: str | int) -> np.random.SeedSequence:
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for part in parts:
        entropy.append(_name_key(part) if isinstance(part, str) else int(part))
    return np.random.SeedSequence(entropy)


def derive_rng(seed: int, *parts: str | int) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, *parts))


def derive_int(seed: int, *parts: str | int, bits: int = 32) -> int:
    words = seed_sequence(seed, *parts).generate_state(2, dtype=np.uint32)
    value = (int(words[1]) << 32) | int(words[0])
    return value & ((1 << bits) - 1)
