"""Named, splittable random streams derived from a master seed."""
import zlib
from typing import Union

import numpy as np

Key = Union[int, str]


def _key(key: Key) -> int:
    if isinstance(key, str):
        return zlib.crc32(key.encode("utf-8"))
    if key < 0:
        raise ValueError(f"stream keys must be non-negative, got {key}")
    return int(key)


def seed_sequence(seed: int, *keys: Key) -> np.random.SeedSequence:
    """Return the seed sequence for stream ``keys`` under master ``seed``.

    The sequence equals the child obtained by repeated ``spawn`` calls, so a
    replication index used as the last key gives the same stream whether
    replications run serially or on a pool.
    """
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(_key(k) for k in keys))


def make_rng(seed: int, *keys: Key) -> np.random.Generator:
    """Return a generator for stream ``keys`` under master ``seed``."""
    return np.random.default_rng(seed_sequence(seed, *keys))


def derive_seed(seed: int, *keys: Key) -> int:
    """Return a 63-bit integer seed for stream ``keys`` (for APIs taking ints)."""
    return int(seed_sequence(seed, *keys).generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
