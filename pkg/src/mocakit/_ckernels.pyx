# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Signatures mirror :mod:`mocakit._pykernels`."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, uint32_t, int64_t
from libc.stdlib cimport calloc, free

cnp.import_array()


def binary_ca_image(const uint8_t[::1] table, int d, int width):
    """Image of every ``width``-cell binary configuration under the NBCA.

    Configurations and outputs are integers with the leftmost cell as the
    least significant bit; ``table`` is indexed lexicographically
    (leftmost neighbourhood cell most significant).
    """
    if width < d:
        raise ValueError("width must be at least the diameter")
    cdef int nwin = 1 << d
    cdef int nout = width - d + 1
    cdef Py_ssize_t total = (<Py_ssize_t>1) << width
    cdef uint8_t[::1] lsb = np.empty(nwin, dtype=np.uint8)
    cdef int w, j, r, k
    for w in range(nwin):
        r = 0
        for j in range(d):
            if (w >> j) & 1:
                r |= 1 << (d - 1 - j)
        lsb[w] = table[r]
    out = np.empty(total, dtype=np.uint32)
    cdef uint32_t[::1] o = out
    cdef Py_ssize_t x
    cdef uint32_t mask = nwin - 1
    cdef uint32_t acc
    with nogil:
        for x in range(total):
            acc = 0
            for k in range(nout):
                acc |= (<uint32_t>lsb[(x >> k) & mask]) << k
            o[x] = acc
    return out


def superposition_is_bijective(const uint32_t[::1] a, const uint32_t[::1] b, Py_ssize_t n):
    """True iff the pairs ``(a[i], b[i])`` are pairwise distinct and cover ``n*n`` cells."""
    cdef Py_ssize_t length = a.shape[0]
    if b.shape[0] != length:
        raise ValueError("length mismatch")
    if length != n * n:
        return False
    cdef uint8_t* seen = <uint8_t*> calloc(n * n, 1)
    if seen == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, key
    cdef bint ok = True
    with nogil:
        for i in range(length):
            key = a[i] * n + b[i]
            if a[i] >= n or b[i] >= n or seen[key]:
                ok = False
                break
            seen[key] = 1
    free(seen)
    return ok


def fwht(int64_t[::1] v):
    """In-place fast Walsh-Hadamard butterfly on a length-2^n buffer."""
    cdef Py_ssize_t n = v.shape[0]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    cdef Py_ssize_t h = 1, i, j
    cdef int64_t x, y
    with nogil:
        while h < n:
            i = 0
            while i < n:
                for j in range(i, i + h):
                    x = v[j]
                    y = v[j + h]
                    v[j] = x + y
                    v[j + h] = x - y
                i += 2 * h
            h *= 2
    return np.asarray(v)


def cycle_lengths(const int64_t[::1] perm):
    """Cycle lengths of a permutation of ``range(len(perm))``, ordered by least element."""
    cdef Py_ssize_t n = perm.shape[0]
    cdef uint8_t* seen = <uint8_t*> calloc(n if n > 0 else 1, 1)
    if seen == NULL:
        raise MemoryError()
    lengths = []
    cdef Py_ssize_t start, x, ln
    cdef bint bad = False
    for start in range(n):
        if seen[start]:
            continue
        x = start
        ln = 0
        while not seen[x]:
            seen[x] = 1
            ln += 1
            x = perm[x]
            if x < 0 or x >= n:
                bad = True
                break
        if bad or x != start:
            free(seen)
            raise ValueError("input is not a permutation")
        lengths.append(ln)
    free(seen)
    return lengths


def batch_orthogonal(const uint8_t[:, ::1] images, const int64_t[::1] left,
                     const int64_t[::1] right, int n):
    """Orthogonality mask for the image pairs ``(images[left[k]], images[right[k]])``.

    Each image row holds ``n*n`` symbols below ``n <= 256``; a pair is
    orthogonal when its superposition hits every ordered symbol pair once.
    """
    cdef Py_ssize_t npairs = left.shape[0]
    cdef Py_ssize_t length = images.shape[1]
    if right.shape[0] != npairs:
        raise ValueError("length mismatch")
    if n > 256 or length != n * n:
        raise ValueError("images must hold n*n symbols with n <= 256")
    out = np.zeros(npairs, dtype=np.uint8)
    cdef uint8_t[::1] o = out
    cdef uint32_t* stamp = <uint32_t*> calloc(n * n, sizeof(uint32_t))
    if stamp == NULL:
        raise MemoryError()
    cdef Py_ssize_t k, i, key
    cdef const uint8_t* ra
    cdef const uint8_t* rb
    cdef uint32_t tag
    cdef bint ok
    with nogil:
        for k in range(npairs):
            ra = &images[left[k], 0]
            rb = &images[right[k], 0]
            # stamps avoid clearing the table between pairs
            tag = <uint32_t>(k + 1)
            ok = True
            for i in range(length):
                key = ra[i] * n + rb[i]
                if stamp[key] == tag:
                    ok = False
                    break
                stamp[key] = tag
            o[k] = ok
    free(stamp)
    return out
