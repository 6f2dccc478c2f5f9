"""Brute-force reference implementations used to check the library."""

import itertools

import numpy as np

from mocakit.ca import evaluate, encode_block, decode_block
from mocakit.gf import Polynomial


def all_monic(q, k):
    for low in itertools.product(range(q), repeat=k):
        yield Polynomial(list(low) + [1], q)


def divides(a, b):
    return (b % a).is_zero()


def brute_gcd(a, b):
    """Highest-degree monic common divisor by trying every monic polynomial."""
    q = a.q
    best = Polynomial([1], q)
    top = max(a.degree, b.degree)
    for k in range(1, top + 1):
        for c in all_monic(q, k):
            if (a.is_zero() or divides(c, a)) and (b.is_zero() or divides(c, b)):
                best = c
    return best


def brute_irreducible(p):
    """No monic factor of degree 1..deg/2."""
    for k in range(1, p.degree // 2 + 1):
        for c in all_monic(p.q, k):
            if divides(c, p):
                return False
    return True


def brute_square(rule):
    """Cayley table straight from the definition with tuples."""
    q, k = rule.q, rule.d - 1
    n = q ** k
    m = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            m[i, j] = encode_block(evaluate(rule, decode_block(i, k, q) + decode_block(j, k, q)), q)
    return m


def brute_orthogonal(a, b):
    pairs = {(int(x), int(y)) for x, y in zip(np.ravel(a), np.ravel(b))}
    return len(pairs) == np.size(a)


def brute_nonlinearity(table, n):
    """Minimum Hamming distance to all 2^(n+1) affine functions."""
    best = None
    for a in range(1 << n):
        lin = [bin(a & x).count("1") & 1 for x in range(1 << n)]
        for c in (0, 1):
            dist = sum(int(t) != (l ^ c) for t, l in zip(table, lin))
            best = dist if best is None else min(best, dist)
    return best


def brute_walsh(table, n):
    return [sum((-1) ** (int(table[x]) ^ (bin(a & x).count("1") & 1)) for x in range(1 << n))
            for a in range(1 << n)]


def brute_pairwise_balanced(f, g):
    counts = {}
    for w in itertools.product((0, 1), repeat=f.d):
        key = (f(w), g(w))
        counts[key] = counts.get(key, 0) + 1
    return len(counts) == 4 and all(v == 1 << (f.d - 2) for v in counts.values())


def brute_binary_strength(rows, t):
    rows = [tuple(r) for r in rows]
    if not rows:
        return True
    cols = len(rows[0])
    for combo in itertools.combinations(range(cols), t):
        counts = {}
        for r in rows:
            key = tuple(r[c] for c in combo)
            counts[key] = counts.get(key, 0) + 1
        if len(counts) != 2 ** t or len(set(counts.values())) != 1:
            return False
    return True
