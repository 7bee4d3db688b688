"""
Reproducible independent random streams.

Each stream is a Philox counter-based generator keyed by (seed, stream id) through
numpy's SeedSequence, so distinct stream ids give statistically independent
sequences and no global random state is touched.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """
    Identifier of one random stream.

    Attributes:
        seed: Non-negative 64-bit master seed.
        stream: Non-negative 64-bit stream id.
    """

    seed: int
    stream: int = 0

    def __post_init__(self):
        for name, value in (("seed", self.seed), ("stream", self.stream)):
            if not 0 <= int(value) < 2**64:
                raise ValueError(f"{name} must be a non-negative 64-bit integer, got {value}")

    def generator(self) -> np.random.Generator:
        """A fresh generator; identical (seed, stream) pairs replay identical draws."""
        sequence = np.random.SeedSequence(entropy=int(self.seed), spawn_key=(int(self.stream),))
        return np.random.Generator(np.random.Philox(sequence))


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Shorthand for RngStream(seed, stream).generator()."""
    return RngStream(seed, stream).generator()
