"""Latin squares from bipermutive CA, MOLS checks and orthogonal arrays.

Squares are ``N x N`` integer numpy arrays with 0-based symbols; the text and
JSON writers shift to 1-based entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from mocakit.ca import LocalRule, decode_block, encode_block, global_image, require_bipermutive


@dataclass(frozen=True)
class BlockCodec:
    """Bijection between ``length``-cell blocks over GF(q) and ``0..q**length - 1``."""

    q: int
    length: int

    @property
    def size(self) -> int:
        return self.q ** self.length

    def encode(self, block) -> int:
        block = tuple(block)
        if len(block) != self.length:
            raise ValueError(f"expected a block of {self.length} cells")
        return encode_block(block, self.q)

    def decode(self, value: int) -> tuple[int, ...]:
        return decode_block(value, self.length, self.q)


def cayley_table(rule: LocalRule) -> np.ndarray:
    """Cayley table of the CA on ``2(d-1)`` cells; a Latin square of order ``q**(d-1)``."""
    require_bipermutive(rule)
    n = rule.q ** (rule.d - 1)
    flat = global_image(rule, 2 * (rule.d - 1))
    # flat index is left + n * right
    return np.ascontiguousarray(flat.reshape(n, n).T)


def is_latin_square(m) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        return False
    n = m.shape[0]
    symbols = np.unique(m)
    if symbols.size != n:
        return False
    want = np.sort(symbols)
    return all(np.array_equal(np.sort(row), want) for row in m) and \
        all(np.array_equal(np.sort(col), want) for col in m.T)


def _superposed_codes(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    return ia.ravel() * (int(ib.max()) + 1) + ib.ravel()


def are_orthogonal(a, b) -> bool:
    """Every ordered pair of symbols occurs exactly once in the superposition."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"order mismatch: {a.shape} vs {b.shape}")
    n = a.shape[0]
    codes = _superposed_codes(a, b)
    return np.unique(codes).size == n * n == codes.size


def pair_histogram(a, b) -> dict[tuple[int, int], int]:
    a, b = np.asarray(a), np.asarray(b)
    counts: dict[tuple[int, int], int] = {}
    for x, y in zip(a.ravel().tolist(), b.ravel().tolist()):
        counts[(x, y)] = counts.get((x, y), 0) + 1
    return counts


def is_mols_family(squares) -> bool:
    squares = [np.asarray(s) for s in squares]
    if not squares:
        raise ValueError("empty family")
    shape = squares[0].shape
    if any(s.shape != shape for s in squares):
        raise ValueError("squares of different orders")
    if not all(is_latin_square(s) for s in squares):
        return False
    return all(are_orthogonal(a, b) for a, b in itertools.combinations(squares, 2))


@dataclass(frozen=True, eq=False)
class OrthogonalArray:
    """``rows x columns`` array over ``symbols`` symbols, verified to have ``strength``."""

    matrix: np.ndarray
    symbols: int
    strength: int

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2:
            raise ValueError("orthogonal array must be two-dimensional")
        if not _has_strength(m, self.strength, self.symbols):
            raise ValueError(f"array does not have strength {self.strength}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def columns(self) -> int:
        return self.matrix.shape[1]

    @property
    def index(self) -> int:
        return self.rows // self.symbols ** self.strength

    def to_json(self, one_based: bool = True) -> dict:
        off = 1 if one_based else 0
        return {
            "rows": self.rows, "columns": self.columns, "symbols": self.symbols,
            "strength": self.strength, "index": self.index,
            "matrix": (self.matrix + off).tolist(),
        }


def _has_strength(m: np.ndarray, t: int, s: int) -> bool:
    rows, cols = m.shape
    if t == 0:
        return True
    if t > cols or rows % s ** t:
        return False
    lam = rows // s ** t
    if m.min() < 0 or m.max() >= s:
        return False
    weights = s ** np.arange(t, dtype=np.int64)
    for combo in itertools.combinations(range(cols), t):
        codes = m[:, combo].astype(np.int64) @ weights
        counts = np.bincount(codes, minlength=s ** t)
        if counts.min() != lam or counts.max() != lam:
            return False
    return True


def oa_strength(m, t_max: int | None = None, symbols: int | None = None) -> int:
    """Largest ``t <= t_max`` for which every ``t``-column projection is uniform."""
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    if t_max is None:
        t_max = m.shape[1]
    if t_max > m.shape[1]:
        raise ValueError("t_max exceeds the number of columns")
    if symbols is None:
        vals, inv = np.unique(m, return_inverse=True)
        symbols = vals.size
        m = inv.reshape(m.shape)
    best = 0
    # strength t implies strength t - 1, so stop at the first failure
    for t in range(1, t_max + 1):
        if not _has_strength(m, t, symbols):
            break
        best = t
    return best


def mols_to_oa(squares) -> OrthogonalArray:
    """Rows ``(i, j, L_1(i, j), ..., L_k(i, j))``: an OA of strength 2 and index 1."""
    squares = [np.asarray(s) for s in squares]
    if not is_mols_family(squares):
        raise ValueError("squares are not a family of mutually orthogonal Latin squares")
    n = squares[0].shape[0]
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    cols = [i.ravel(), j.ravel()] + [s.ravel() for s in squares]
    return OrthogonalArray(np.stack(cols, axis=1).astype(np.int64), n, 2)


def binary_expand(oa, symbols: int | None = None) -> np.ndarray:
    """Replace each symbol by its bit block (least significant bit first)."""
    if isinstance(oa, OrthogonalArray):
        m, s = oa.matrix, oa.symbols
    else:
        m = np.asarray(oa)
        s = symbols if symbols is not None else int(m.max()) + 1
    nbits = s.bit_length() - 1
    if s < 2 or 1 << nbits != s:
        raise ValueError(f"symbol count {s} is not a power of two")
    bits = (m[:, :, None] >> np.arange(nbits)) & 1
    return bits.reshape(m.shape[0], m.shape[1] * nbits).astype(np.uint8)


def format_square(m, one_based: bool = True) -> str:
    off = 1 if one_based else 0
    return "\n".join(" ".join(str(int(v) + off) for v in row) for row in np.asarray(m))


def format_rows(m) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in np.asarray(m))


def cyclic_square(n: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return (i + j) % n
