import hashlib
from uuid import uuid4

import numpy as np


def parameter_checksum(arrays: list[np.ndarray]) -> str:
    """
    A function that fingerprints a list of parameter arrays.

    The digest covers shapes and the raw float64 bytes, so it changes iff a
    single parameter bit changes.

    Args:
        arrays (list[np.ndarray]): Parameter arrays in a fixed order.
    Returns:
        str: A hex sha256 digest.
    """
    digest = hashlib.sha256()
    for array in arrays:
        contiguous = np.ascontiguousarray(array, dtype=np.float64)
        digest.update(str(contiguous.shape).encode())
        digest.update(contiguous.tobytes())
    return digest.hexdigest()


def id_generator() -> str:
    """
    A function that generates a unique identifier.

    Returns:
        str: A unique identifier.
    """
    return str(uuid4())
