import zlib

import numpy as np


def stream_seed(seed: int, stream: str) -> np.random.SeedSequence:
    """
    Build the seed sequence of a named random stream.

    - Args:
        - seed:: int: The run seed.
        - stream:: str: The component name, e.g. "cu.explore".

    - Returns:
        - SeedSequence: A sequence that only depends on (seed, stream).
    """
    return np.random.SeedSequence([seed, zlib.crc32(stream.encode())])


def derive_rng(seed: int, stream: str) -> np.random.Generator:
    """
    Build the generator of a named random stream.

    - Args:
        - seed:: int: The run seed.
        - stream:: str: The component name.

    - Returns:
        - Generator: An independent numpy generator.
    """
    return np.random.default_rng(stream_seed(seed, stream))
