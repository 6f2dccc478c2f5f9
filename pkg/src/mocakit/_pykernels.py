"""Pure-Python versions of the compiled kernels in ``_ckernels.pyx``.

Same signatures, same results; used when the extension is not built or when
``MOCAKIT_PURE_PYTHON`` is set.
"""

import numpy as np


def binary_ca_image(table, d, width):
    if width < d:
        raise ValueError("width must be at least the diameter")
    table = np.asarray(table, dtype=np.uint8)
    nwin = 1 << d
    # re-index the lexicographic table by LSB-first window value
    lsb = np.empty(nwin, dtype=np.uint32)
    for w in range(nwin):
        r = 0
        for j in range(d):
            if (w >> j) & 1:
                r |= 1 << (d - 1 - j)
        lsb[w] = table[r]
    x = np.arange(1 << width, dtype=np.uint32)
    out = np.zeros(1 << width, dtype=np.uint32)
    mask = np.uint32(nwin - 1)
    for k in range(width - d + 1):
        out |= lsb[(x >> np.uint32(k)) & mask] << np.uint32(k)
    return out


def superposition_is_bijective(a, b, n):
    if len(a) != len(b):
        raise ValueError("length mismatch")
    if len(a) != n * n:
        return False
    seen = bytearray(n * n)
    for x, y in zip(a.tolist() if hasattr(a, "tolist") else a,
                    b.tolist() if hasattr(b, "tolist") else b):
        if x >= n or y >= n:
            return False
        key = x * n + y
        if seen[key]:
            return False
        seen[key] = 1
    return True


def fwht(v):
    n = len(v)
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < n:
        blocks = v.reshape(-1, 2, h)
        a = blocks[:, 0, :].copy()
        b = blocks[:, 1, :]
        blocks[:, 0, :] += b
        blocks[:, 1, :] = a - b
        h *= 2
    return v


def cycle_lengths(perm):
    perm = [int(p) for p in perm]
    n = len(perm)
    seen = bytearray(n)
    lengths = []
    for start in range(n):
        if seen[start]:
            continue
        x, ln = start, 0
        while not seen[x]:
            seen[x] = 1
            ln += 1
            x = perm[x]
            if not 0 <= x < n:
                raise ValueError("input is not a permutation")
        if x != start:
            raise ValueError("input is not a permutation")
        lengths.append(ln)
    return lengths


def batch_orthogonal(images, left, right, n):
    images = np.asarray(images)
    if len(left) != len(right):
        raise ValueError("length mismatch")
    if n > 256 or images.shape[1] != n * n:
        raise ValueError("images must hold n*n symbols with n <= 256")
    out = np.zeros(len(left), dtype=np.uint8)
    for k, (a, b) in enumerate(zip(left, right)):
        codes = images[a].astype(np.int64) * n + images[b]
        out[k] = np.unique(codes).size == codes.size
    return out
