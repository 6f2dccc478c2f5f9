"""Kernel backend selection.

The compiled extension is used when importable; set ``MOCAKIT_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

import os

import numpy as np

from mocakit import _pykernels

if os.environ.get("MOCAKIT_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from mocakit import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def binary_ca_image(table, d: int, width: int) -> np.ndarray:
    return _impl.binary_ca_image(np.ascontiguousarray(table, dtype=np.uint8), d, width)


def superposition_is_bijective(a, b, n: int) -> bool:
    return bool(_impl.superposition_is_bijective(
        np.ascontiguousarray(a, dtype=np.uint32), np.ascontiguousarray(b, dtype=np.uint32), n))


def fwht(values) -> np.ndarray:
    """Walsh-Hadamard butterfly on a copy of ``values``."""
    buf = np.array(values, dtype=np.int64, copy=True)
    return _impl.fwht(buf)


def cycle_lengths(perm) -> list[int]:
    return list(_impl.cycle_lengths(np.ascontiguousarray(perm, dtype=np.int64)))


def batch_orthogonal(images, left, right, n: int) -> np.ndarray:
    return _impl.batch_orthogonal(
        np.ascontiguousarray(images, dtype=np.uint8),
        np.ascontiguousarray(left, dtype=np.int64),
        np.ascontiguousarray(right, dtype=np.int64), n)
