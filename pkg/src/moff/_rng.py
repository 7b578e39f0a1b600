"""Named random streams derived from a single run seed."""

import zlib

import numpy as np


def stream(seed: int, name: str) -> np.random.Generator:
    """Return an independent generator for component `name` under `seed`.

    Streams are keyed by name, so adding a new component never shifts the
    draws seen by an existing one.
    """
    key = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(key,)))
