"""Prime-field arithmetic, polynomials over GF(q) and small matrix algebra.

Polynomials are coefficient tuples in ascending degree, so ``[1, 0, 1]`` is
``1 + X^2``. The zero polynomial has no coefficients. Matrices wrap an
``int64`` numpy array whose entries live in ``{0, ..., q-1}``.

Only prime moduli are supported.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization, ``{prime: exponent}``."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def gauss_count(q: int, k: int) -> int:
    """Number of monic irreducible polynomials of degree ``k`` over GF(q)."""
    total = sum(mobius(m) * q ** (k // m) for m in range(1, k + 1) if k % m == 0)
    return total // k


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(q)."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not is_prime(self.q):
            raise ValueError(f"field order must be prime, got {self.q!r}")

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.q - 2, self.q)


@functools.lru_cache(maxsize=None)
def field(q: int) -> FieldSpec:
    return FieldSpec(q)


def _as_field(f) -> FieldSpec:
    return f if isinstance(f, FieldSpec) else field(f)


class Polynomial:
    """Immutable polynomial over GF(q), ascending coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, coeffs, q=2):
        fld = _as_field(q)
        c = [int(a) % fld.q for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "field", fld)
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    @classmethod
    def monomial(cls, k: int, q: int = 2) -> Polynomial:
        return cls([0] * k + [1], q)

    def _check(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.q != self.q:
            raise ValueError(f"field mismatch: GF({self.q}) vs GF({other.q})")
        return other

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.q == other.q and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __lt__(self, other):
        # degree first, then coefficients from the top down
        other = self._check(other)
        return (self.degree, self.coeffs[::-1]) < (other.degree, other.coeffs[::-1])

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        return Polynomial([x + y for x, y in itertools.zip_longest(a, b, fillvalue=0)], self.field)

    def __neg__(self):
        return Polynomial([-a for a in self.coeffs], self.field)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial([a * other for a in self.coeffs], self.field)
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return Polynomial([], self.field)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out, self.field)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = self.q
        rem = list(self.coeffs)
        dq = other.degree
        inv_lc = self.field.inv(other.lc)
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv_lc % q
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] = (rem[k - dq + j] - c * b) % q
        return Polynomial(quot, self.field), Polynomial(rem[:dq], self.field)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % self.q
        return acc

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        return self * self.field.inv(self.lc)

    def pow_mod(self, e: int, mod: Polynomial) -> Polynomial:
        result = Polynomial([1], self.field) % mod
        base = self % mod
        while e:
            if e & 1:
                result = result * base % mod
            base = base * base % mod
            e >>= 1
        return result

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    @classmethod
    def from_json(cls, data, q: int) -> Polynomial:
        return cls([int(a) for a in data], q)

    def __repr__(self):
        if self.is_zero():
            return f"Polynomial(0, q={self.q})"
        terms = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if i == 0:
                terms.append(str(a))
            else:
                terms.append(mono if a == 1 else f"{a}*{mono}")
        return f"Polynomial({' + '.join(terms)}, q={self.q})"


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor by Euclid's algorithm."""
    if a.q != b.q:
        raise ValueError(f"field mismatch: GF({a.q}) vs GF({b.q})")
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def monic_polynomials(q: int, k: int, nonzero_constant: bool = False):
    """All monic degree-``k`` polynomials in canonical (ascending lexicographic) order."""
    for low in itertools.product(range(q), repeat=k):
        low = low[::-1]
        if nonzero_constant and k > 0 and low[0] == 0:
            continue
        yield Polynomial(list(low) + [1], q)


def is_irreducible(p: Polynomial) -> bool:
    """Ben-Or test: ``gcd(p, X^(q^i) - X) = 1`` for every ``i <= deg/2``."""
    n = p.degree
    if n < 1:
        return False
    if n == 1:
        return True
    x = Polynomial([0, 1], p.field)
    h = x
    for _ in range(n // 2):
        h = h.pow_mod(p.q, p)
        if not poly_gcd(p, h - x).is_one():
            return False
    return True


def irreducibles(q: int, k: int, nonzero_constant: bool = False) -> list[Polynomial]:
    """Monic irreducible polynomials of degree ``k`` in canonical order."""
    if k < 1:
        raise ValueError("degree must be at least 1")
    return [p for p in monic_polynomials(q, k, nonzero_constant) if is_irreducible(p)]


class FieldMatrix:
    """Dense matrix over GF(q)."""

    __slots__ = ("field", "a")

    def __init__(self, entries, q=2):
        fld = _as_field(q)
        arr = np.array(entries, dtype=np.int64) % fld.q
        if arr.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        arr.setflags(write=False)
        object.__setattr__(self, "field", fld)
        object.__setattr__(self, "a", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FieldMatrix is immutable")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @classmethod
    def identity(cls, n: int, q: int = 2) -> FieldMatrix:
        return cls(np.eye(n, dtype=np.int64), q)

    @classmethod
    def zeros(cls, rows: int, cols: int, q: int = 2) -> FieldMatrix:
        return cls(np.zeros((rows, cols), dtype=np.int64), q)

    def __matmul__(self, other):
        if isinstance(other, FieldMatrix):
            if other.q != self.q:
                raise ValueError("field mismatch")
            return FieldMatrix(self.a @ other.a, self.field)
        vec = np.asarray(other, dtype=np.int64)
        return (self.a @ vec) % self.q

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash((self.q, self.a.shape, self.a.tobytes()))

    def is_identity(self) -> bool:
        return self.is_square and np.array_equal(self.a, np.eye(self.rows, dtype=np.int64))

    def power(self, e: int) -> FieldMatrix:
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        result = np.eye(self.rows, dtype=np.int64)
        base = self.a.copy()
        q = self.q
        while e:
            if e & 1:
                result = result @ base % q
            base = base @ base % q
            e >>= 1
        return FieldMatrix(result, self.field)

    def rank(self) -> int:
        return len(_rref(self.a, self.q)[1])

    def nullspace(self) -> list[np.ndarray]:
        """Basis of ``{x : M x = 0}``, one vector per free column."""
        r, pivots = _rref(self.a, self.q)
        q = self.q
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for fcol in free:
            v = np.zeros(self.cols, dtype=np.int64)
            v[fcol] = 1
            for row, pcol in enumerate(pivots):
                v[pcol] = (-r[row, fcol]) % q
            basis.append(v)
        return basis

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def __repr__(self):
        rows = "; ".join("".join(str(x) for x in row) if self.q <= 10 else " ".join(map(str, row))
                         for row in self.a.tolist())
        return f"FieldMatrix([{rows}], q={self.q})"


def _rref(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    m = np.array(a, dtype=np.int64) % q
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = m[r] * pow(int(m[r, c]), q - 2, q) % q
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % q
        pivots.append(c)
        r += 1
    return m, pivots


def sylvester_matrix(a, b, q: int = 2) -> FieldMatrix:
    """Stack ``d-1`` shifted copies of ``a`` over ``d-1`` shifted copies of ``b``.

    ``a`` and ``b`` are local-rule coefficient vectors ``(a_1, ..., a_d)``;
    the result is the ``2(d-1)`` square matrix of the superposed linear map.
    """
    a = [int(x) for x in a]
    b = [int(x) for x in b]
    if len(a) != len(b):
        raise ValueError(f"coefficient vectors differ in length: {len(a)} vs {len(b)}")
    d = len(a)
    if d < 2:
        raise ValueError("diameter must be at least 2")
    n = d - 1
    m = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for r in range(n):
        m[r, r:r + d] = a
        m[n + r, r:r + d] = b
    return FieldMatrix(m, q)


def matrix_invert(m: FieldMatrix) -> FieldMatrix | None:
    """Inverse of ``m``, or ``None`` when ``m`` is singular."""
    if not m.is_square:
        raise ValueError("cannot invert a non-square matrix")
    n = m.rows
    aug = np.concatenate([m.a, np.eye(n, dtype=np.int64)], axis=1)
    r, pivots = _rref(aug, m.q)
    if pivots[:n] != list(range(n)):
        return None
    return FieldMatrix(r[:, n:], m.field)


def solve(m: FieldMatrix, rhs) -> np.ndarray | None:
    """Solve ``m x = rhs`` for square invertible ``m``; ``None`` if singular."""
    inv = matrix_invert(m)
    if inv is None:
        return None
    return inv @ np.asarray(rhs, dtype=np.int64)


def minimal_polynomial(m: FieldMatrix) -> Polynomial:
    """Monic polynomial of least degree annihilating ``m``."""
    if not m.is_square:
        raise ValueError("minimal polynomial of a non-square matrix")
    q = m.q
    n = m.rows
    powers = [np.eye(n, dtype=np.int64).ravel()]
    cur = np.eye(n, dtype=np.int64)
    for k in range(1, n + 1):
        cur = cur @ m.a % q
        target = cur.ravel()
        basis = np.stack(powers, axis=1)
        aug = np.concatenate([basis, target[:, None]], axis=1)
        r, pivots = _rref(aug, q)
        if k not in pivots:
            # target = sum c_i M^i; pivots are exactly 0..k-1 since powers were independent
            coeffs = [0] * k
            for row, pcol in enumerate(pivots):
                coeffs[pcol] = int(r[row, k])
            return Polynomial([-c for c in coeffs] + [1], q)
        powers.append(target)
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover


def matrix_order(m: FieldMatrix) -> int | None:
    """Least ``e >= 1`` with ``m^e = I``; ``None`` when ``m`` is singular."""
    if not m.is_square:
        raise ValueError("order of a non-square matrix")
    if matrix_invert(m) is None:
        return None
    q = m.q
    ident = np.eye(m.rows, dtype=np.int64)
    cur = m.a.copy()
    e = 1
    # no element of GL(n, q) has order above q^n - 1
    bound = q ** m.rows
    while not np.array_equal(cur, ident):
        cur = cur @ m.a % q
        e += 1
        if e > bound:  # pragma: no cover
            raise AssertionError("matrix order exceeded the GL(n, q) bound")
    return e


def companion_matrix(p: Polynomial) -> FieldMatrix:
    p = p.monic()
    k = p.degree
    if k < 1:
        raise ValueError("companion matrix needs degree >= 1")
    c = np.zeros((k, k), dtype=np.int64)
    c[1:, :-1] = np.eye(k - 1, dtype=np.int64)
    c[:, -1] = [(-a) % p.q for a in p.coeffs[:-1]]
    return FieldMatrix(c, p.field)


def is_primitive(p: Polynomial) -> bool:
    """Whether a root of the irreducible ``p`` generates GF(q^deg)^*."""
    if p.degree < 1 or p.lc != 1:
        raise ValueError("is_primitive expects a monic polynomial of degree >= 1")
    if p.coeffs[0] == 0:
        raise ValueError("is_primitive expects a nonzero constant term")
    if not is_irreducible(p):
        raise ValueError(f"{p!r} is reducible")
    full = p.q ** p.degree - 1
    c = companion_matrix(p)
    if not c.power(full).is_identity():  # pragma: no cover - irreducible implies this
        return False
    return all(not c.power(full // r).is_identity() for r in factorize(full))
