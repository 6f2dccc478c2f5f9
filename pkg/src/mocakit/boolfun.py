"""Boolean functions: Walsh spectra, nonlinearity, bent and correlation-immune
functions built from orthogonal CA families.

A function of ``n`` variables is a table of ``2**n`` bits indexed by the
integer with ``x_1`` as the least significant bit, the same convention as the
block codec, so supports line up with orthogonal-array rows.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from mocakit import kernels
from mocakit.ca import LocalRule, RuleError, associated_polynomial, require_bipermutive
from mocakit.designs import OrthogonalArray, _has_strength, binary_expand, mols_to_oa, oa_strength
from mocakit.gf import FieldMatrix
from mocakit.linear_moca import MocaFamily, family_to_mols


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    n: int
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.uint8).ravel()
        if t.size != 1 << self.n:
            raise ValueError(f"truth table of {self.n} variables needs {1 << self.n} entries, got {t.size}")
        if t.size and t.max() > 1:
            raise ValueError("truth table entries must be 0 or 1")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    def __eq__(self, other):
        return isinstance(other, BooleanFunction) and self.n == other.n and \
            np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def __call__(self, x) -> int:
        return int(self.table[index_of(x)])

    @property
    def weight(self) -> int:
        return int(self.table.sum())

    def support(self) -> list[int]:
        return np.flatnonzero(self.table).tolist()

    def support_rows(self) -> np.ndarray:
        """Support as a 0/1 matrix, one row per input, column ``i`` = ``x_{i+1}``."""
        idx = np.flatnonzero(self.table)
        return ((idx[:, None] >> np.arange(self.n)) & 1).astype(np.uint8)

    @classmethod
    def from_support(cls, n: int, points) -> BooleanFunction:
        t = np.zeros(1 << n, dtype=np.uint8)
        for p in points:
            t[p if isinstance(p, (int, np.integer)) else index_of(p)] = 1
        return cls(n, t)

    @classmethod
    def from_rule(cls, rule: LocalRule) -> BooleanFunction:
        """The local rule as a function of its ``d`` neighbourhood cells."""
        if rule.q != 2:
            raise RuleError("Boolean functions need a binary rule")
        lex = np.array(rule.full_table(), dtype=np.uint8)
        d = rule.d
        # lexicographic tables put x_1 in the most significant bit
        idx = np.arange(1 << d)
        rev = np.zeros_like(idx)
        for j in range(d):
            rev |= ((idx >> j) & 1) << (d - 1 - j)
        return cls(d, lex[rev])

    def to_hex(self) -> str:
        return table_to_hex(self.table)

    @classmethod
    def from_hex(cls, n: int, text: str) -> BooleanFunction:
        return cls(n, hex_to_table(text, 1 << n))

    def to_json(self) -> dict:
        return {"n": self.n, "table": self.to_hex()}

    @classmethod
    def from_json(cls, data: dict) -> BooleanFunction:
        return cls.from_hex(int(data["n"]), data["table"])


def index_of(x) -> int:
    return sum(int(b) << i for i, b in enumerate(x))


def table_to_hex(bits) -> str:
    """Pack bits LSB-first: bit ``i`` lands in bit ``i % 8`` of byte ``i // 8``."""
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    return np.packbits(bits, bitorder="little").tobytes().hex()


def hex_to_table(text: str, length: int) -> np.ndarray:
    raw = bytes.fromhex(text)
    if len(raw) != (length + 7) // 8:
        raise ValueError(f"hex string has {len(raw)} bytes, expected {(length + 7) // 8}")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    if bits[length:].any():
        raise ValueError("padding bits must be zero")
    return bits[:length]


def walsh_transform(f: BooleanFunction) -> np.ndarray:
    """``W_f(a) = sum_x (-1)^(f(x) + a.x)`` for every ``a``."""
    signs = 1 - 2 * f.table.astype(np.int64)
    w = kernels.fwht(signs)
    assert int((w * w).sum()) == 1 << (2 * f.n), "Parseval identity violated"
    return w


def nonlinearity(f: BooleanFunction) -> int:
    w = walsh_transform(f)
    return (1 << (f.n - 1)) - int(np.abs(w).max()) // 2


def is_bent(f: BooleanFunction) -> bool:
    if f.n % 2:
        return False
    return bool(np.all(np.abs(walsh_transform(f)) == 1 << (f.n // 2)))


def kernel_basis(rule: LocalRule) -> list[tuple[int, ...]]:
    """Basis of ``{x in F_2^(2(d-1)) : F(x) = 0}`` for a linear binary rule."""
    if rule.coeffs is None:
        raise RuleError("kernel_basis needs a linear rule")
    if rule.q != 2:
        raise RuleError("kernel_basis is defined over F_2")
    require_bipermutive(rule)
    d = rule.d
    width = 2 * (d - 1)
    rows = np.zeros((d - 1, width), dtype=np.int64)
    for i in range(d - 1):
        rows[i, i:i + d] = rule.coeffs
    basis = FieldMatrix(rows, 2).nullspace()
    return [tuple(int(v) for v in b) for b in basis]


def span(basis) -> set[tuple[int, ...]]:
    basis = [np.asarray(b, dtype=np.int64) for b in basis]
    if not basis:
        return set()
    pts = set()
    for mask in range(1 << len(basis)):
        v = np.zeros_like(basis[0])
        for i, b in enumerate(basis):
            if (mask >> i) & 1:
                v = v ^ b
        pts.add(tuple(int(c) for c in v))
    return pts


def _family_rules(family) -> list[LocalRule]:
    return family.rules() if isinstance(family, MocaFamily) else list(family)


def bent_from_family(family, b: int) -> BooleanFunction:
    """Indicator of the union of the CA kernels, origin removed, on ``2b`` variables.

    The family must hold ``2**(b-1)`` pairwise coprime binary polynomials of
    degree ``b``; only ``b`` in {1, 2} is supported.
    """
    if b not in (1, 2):
        raise ValueError(f"degree must be 1 or 2, got {b}")
    rules = _family_rules(family)
    if len(rules) != 1 << (b - 1):
        raise ValueError(f"need exactly {1 << (b - 1)} polynomials of degree {b}, got {len(rules)}")
    for r in rules:
        if r.q != 2 or r.coeffs is None or r.d != b + 1:
            raise ValueError(f"rule {r} is not a linear binary rule of diameter {b + 1}")
    if not isinstance(family, MocaFamily):
        # construction checks pairwise coprimality
        MocaFamily(2, b, tuple(associated_polynomial(r) for r in rules))
    support = set()
    for r in rules:
        support |= span(kernel_basis(r))
    support.discard((0,) * (2 * b))
    f = BooleanFunction.from_support(2 * b, support)
    if not is_bent(f):  # pragma: no cover
        raise ArithmeticError("partial-spread construction did not give a bent function")
    return f


def ci_function_from_family(family, coordinates: bool = True) -> BooleanFunction:
    """Function whose support is the binary expansion of the family's orthogonal array.

    With ``coordinates`` the array rows are ``(i, j, L_1(i, j), ..., L_k(i, j))``;
    without, only the superposed outputs ``(L_1, ..., L_k)`` are kept.
    """
    squares = family_to_mols(family)
    if coordinates:
        oa = mols_to_oa(squares)
    else:
        m = np.stack([np.asarray(s).ravel() for s in squares], axis=1).astype(np.int64)
        oa = OrthogonalArray(m, squares[0].shape[0], min(len(squares), 2))
    rows = binary_expand(oa)
    n = rows.shape[1]
    weights = 1 << np.arange(n, dtype=np.int64)
    table = np.zeros(1 << n, dtype=np.uint8)
    table[rows.astype(np.int64) @ weights] = 1
    return BooleanFunction(n, table)


def is_correlation_immune(f: BooleanFunction, t: int) -> bool:
    """Support-OA criterion: every ``t`` columns of the support rows are uniform."""
    if not 0 <= t <= f.n:
        raise ValueError(f"order {t} out of range 0..{f.n}")
    if t == 0:
        return True
    rows = f.support_rows()
    if rows.shape[0] == 0:
        warnings.warn("empty support: correlation immunity holds only vacuously", stacklevel=2)
        return True
    return _has_strength(rows, t, 2)


def ci_order(f: BooleanFunction) -> int:
    """Largest ``t`` such that :func:`is_correlation_immune` holds."""
    rows = f.support_rows()
    if rows.shape[0] == 0:
        warnings.warn("empty support: correlation immunity holds only vacuously", stacklevel=2)
        return f.n
    return oa_strength(rows, symbols=2)
