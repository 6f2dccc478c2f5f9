"""Local rules, no-boundary cellular automata, de Bruijn graphs and preimages.

A configuration is a tuple of cell values, leftmost cell first. A block of
``k`` cells maps to the integer ``sum(c_i * q**i)``: the leftmost cell is the
least significant digit. Every module in the package uses that codec.

Binary rule tables are indexed lexicographically with the leftmost
neighbourhood cell most significant, so bit ``i`` of the Wolfram code is the
output for input ``i`` (rule 150 is ``0,1,1,0,1,0,0,1`` for ``000..111``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from mocakit import kernels
from mocakit.gf import Polynomial, field


class RuleError(ValueError):
    """A local rule does not meet the requirement of an operation."""


def encode_block(cells, q: int = 2) -> int:
    v = 0
    for c in reversed(tuple(cells)):
        v = v * q + int(c)
    return v


def decode_block(value: int, length: int, q: int = 2) -> tuple[int, ...]:
    if not 0 <= value < q ** length:
        raise ValueError(f"block index {value} out of range for {length} cells over GF({q})")
    out = []
    for _ in range(length):
        value, r = divmod(value, q)
        out.append(r)
    return tuple(out)


def parse_config(text: str) -> tuple[int, ...]:
    """``"100001"`` -> ``(1, 0, 0, 0, 0, 1)``."""
    text = text.strip()
    if not text.isdigit():
        raise ValueError(f"configuration must be a digit string, got {text!r}")
    return tuple(int(ch) for ch in text)


def format_config(cells) -> str:
    return "".join(str(int(c)) for c in cells)


@dataclass(frozen=True)
class LocalRule:
    """Local rule of diameter ``d`` over GF(q).

    Exactly one of ``coeffs`` (linear rule ``a_1 x_1 + ... + a_d x_d``) and
    ``table`` (``q**d`` outputs in lexicographic input order) is set.
    """

    q: int
    d: int
    coeffs: tuple[int, ...] | None = None
    table: tuple[int, ...] | None = dc_field(default=None, repr=False)

    def __post_init__(self):
        field(self.q)
        if self.d < 2:
            raise RuleError("diameter must be at least 2")
        if (self.coeffs is None) == (self.table is None):
            raise RuleError("give exactly one of coeffs or table")
        if self.coeffs is not None:
            c = tuple(int(a) % self.q for a in self.coeffs)
            if len(c) != self.d:
                raise RuleError(f"linear rule needs {self.d} coefficients, got {len(c)}")
            object.__setattr__(self, "coeffs", c)
        else:
            t = tuple(int(a) for a in self.table)
            if len(t) != self.q ** self.d:
                raise RuleError(f"rule table needs {self.q ** self.d} entries, got {len(t)}")
            if any(not 0 <= a < self.q for a in t):
                raise RuleError("rule table entries out of range")
            object.__setattr__(self, "table", t)

    @classmethod
    def linear(cls, coeffs, q: int = 2) -> LocalRule:
        coeffs = tuple(coeffs)
        return cls(q=q, d=len(coeffs), coeffs=coeffs)

    @classmethod
    def from_table(cls, table, q: int = 2) -> LocalRule:
        table = tuple(table)
        d = 0
        while q ** d < len(table):
            d += 1
        return cls(q=q, d=d, table=table)

    @classmethod
    def wolfram(cls, code: int, d: int = 3) -> LocalRule:
        if not 0 <= code < 1 << (1 << d):
            raise RuleError(f"Wolfram code {code} out of range for d={d}")
        return cls(q=2, d=d, table=tuple((code >> i) & 1 for i in range(1 << d)))

    @property
    def is_linear(self) -> bool:
        return self.coeffs is not None

    def __call__(self, window) -> int:
        if self.coeffs is not None:
            return sum(a * x for a, x in zip(self.coeffs, window)) % self.q
        idx = 0
        for x in window:
            idx = idx * self.q + x
        return self.table[idx]

    def full_table(self) -> tuple[int, ...]:
        """Outputs for all ``q**d`` neighbourhoods, lexicographic order."""
        if self.table is not None:
            return self.table
        return tuple(self(w) for w in itertools.product(range(self.q), repeat=self.d))

    @property
    def wolfram_code(self) -> int:
        if self.q != 2:
            raise RuleError("Wolfram codes are defined for binary rules only")
        return sum(b << i for i, b in enumerate(self.full_table()))

    def as_table(self) -> LocalRule:
        return LocalRule(q=self.q, d=self.d, table=self.full_table())

    def to_json(self) -> dict:
        if self.coeffs is not None:
            return {"kind": "linear", "q": self.q, "coeffs": list(self.coeffs)}
        if self.q == 2:
            return {"kind": "table", "d": self.d, "wolfram": self.wolfram_code}
        return {"kind": "table", "q": self.q, "d": self.d, "table": list(self.table)}

    @classmethod
    def from_json(cls, data: dict) -> LocalRule:
        kind = data.get("kind")
        if kind == "linear":
            return cls.linear(data["coeffs"], int(data.get("q", 2)))
        if kind == "table":
            if "wolfram" in data:
                return cls.wolfram(int(data["wolfram"]), int(data["d"]))
            return cls(q=int(data.get("q", 2)), d=int(data["d"]), table=tuple(data["table"]))
        raise RuleError(f"unknown rule kind {kind!r}")

    def __str__(self):
        if self.coeffs is not None:
            return f"linear:q{self.q}:{','.join(map(str, self.coeffs))}"
        if self.q == 2:
            return f"wolfram:{self.wolfram_code}:d{self.d}"
        return f"table:q{self.q}:d{self.d}"


def evaluate(rule: LocalRule, x) -> tuple[int, ...]:
    """Apply the NBCA: ``len(x) - d + 1`` output cells."""
    x = tuple(x)
    d = rule.d
    if len(x) < d:
        raise ValueError(f"configuration of length {len(x)} is shorter than the diameter {d}")
    return tuple(rule(x[i:i + d]) for i in range(len(x) - d + 1))


def global_image(rule: LocalRule, width: int) -> np.ndarray:
    """Encoded NBCA output for every encoded input of ``width`` cells."""
    q, d = rule.q, rule.d
    if q == 2:
        table = np.array(rule.full_table(), dtype=np.uint8)
        return kernels.binary_ca_image(table, d, width).astype(np.int64)
    n = q ** width
    xs = np.arange(n, dtype=np.int64)
    digits = np.stack([(xs // q ** i) % q for i in range(width)], axis=1)
    out = np.zeros(n, dtype=np.int64)
    table = np.array(rule.full_table(), dtype=np.int64)
    for k in range(width - d + 1):
        win = digits[:, k:k + d]
        if rule.coeffs is not None:
            cell = (win @ np.array(rule.coeffs, dtype=np.int64)) % q
        else:
            idx = np.zeros(n, dtype=np.int64)
            for j in range(d):
                idx = idx * q + win[:, j]
            cell = table[idx]
        out += cell * q ** k
    return out


def _permutive_at(rule: LocalRule, pos: int) -> bool:
    q, d = rule.q, rule.d
    for rest in itertools.product(range(q), repeat=d - 1):
        outs = {rule(rest[:pos] + (v,) + rest[pos:]) for v in range(q)}
        if len(outs) != q:
            return False
    return True


def is_bipermutive(rule: LocalRule) -> bool:
    if rule.coeffs is not None:
        return rule.coeffs[0] != 0 and rule.coeffs[-1] != 0
    return _permutive_at(rule, 0) and _permutive_at(rule, rule.d - 1)


def require_bipermutive(rule: LocalRule) -> None:
    if not is_bipermutive(rule):
        raise RuleError(f"rule {rule} is not bipermutive")


def from_generating(g) -> LocalRule:
    """Binary bipermutive rule ``x_1 + g(x_2..x_{d-1}) + x_d`` from the truth table of ``g``.

    ``g`` has ``2**(d-2)`` entries in lexicographic order; an empty or
    one-entry table over zero variables gives ``d = 2``.
    """
    g = tuple(int(b) & 1 for b in g)
    if len(g) == 0:
        g = (0,)
    k = len(g).bit_length() - 1
    if 1 << k != len(g):
        raise RuleError("generating table length must be a power of two")
    d = k + 2
    table = []
    for idx in range(1 << d):
        x1 = (idx >> (d - 1)) & 1
        xd = idx & 1
        center = (idx >> 1) & ((1 << k) - 1)
        table.append(x1 ^ g[center] ^ xd)
    return LocalRule(q=2, d=d, table=tuple(table))


def extract_generating(rule: LocalRule) -> tuple[int, ...]:
    """Truth table of the centre function of a binary bipermutive rule."""
    if rule.q != 2:
        raise RuleError("generating functions are defined for binary rules")
    require_bipermutive(rule)
    d = rule.d
    table = rule.full_table()
    return tuple(table[c << 1] for c in range(1 << (d - 2)))


def associated_polynomial(rule: LocalRule) -> Polynomial:
    if rule.coeffs is None:
        raise RuleError("associated polynomials exist only for linear rules")
    return Polynomial(rule.coeffs, rule.q)


def rule_from_polynomial(p: Polynomial) -> LocalRule:
    """Linear rule whose coefficients are those of ``p`` (degree ``d - 1``)."""
    if p.degree < 1:
        raise RuleError("polynomial must have degree at least 1")
    return LocalRule.linear(p.coeffs, p.q)


def fusion(u, v) -> tuple[int, ...]:
    u, v = tuple(u), tuple(v)
    if len(u) != len(v) or not u:
        raise ValueError("fusion needs two non-empty blocks of equal length")
    if u[1:] != v[:-1]:
        raise ValueError(f"blocks {format_config(u)} and {format_config(v)} do not overlap")
    return u + v[-1:]


@dataclass(frozen=True)
class DeBruijnGraph:
    """Vertices are ``(d-1)``-blocks; ``edges[(u, v)]`` is the label ``f(u . v)``."""

    q: int
    d: int
    edges: dict

    @property
    def vertices(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(self.q), repeat=self.d - 1))

    def successors(self, u):
        u = tuple(u)
        return [(u[1:] + (s,), self.edges[(u, u[1:] + (s,))]) for s in range(self.q)]

    def path_labels(self, x) -> tuple[int, ...]:
        """Labels along the vertex path spelled by configuration ``x``."""
        x = tuple(x)
        k = self.d - 1
        verts = [x[i:i + k] for i in range(len(x) - k + 1)]
        return tuple(self.edges[(a, b)] for a, b in zip(verts, verts[1:]))


def de_bruijn(rule: LocalRule) -> DeBruijnGraph:
    edges = {}
    for w in itertools.product(range(rule.q), repeat=rule.d):
        edges[(w[:-1], w[1:])] = rule(w)
    return DeBruijnGraph(rule.q, rule.d, edges)


def _solve_cell(rule: LocalRule, known, y: int, last: bool) -> int:
    """The unique cell completing ``known`` (d-1 cells) to a window with output ``y``."""
    q = rule.q
    if rule.coeffs is not None:
        a = rule.coeffs
        if last:
            partial = sum(c * x for c, x in zip(a[:-1], known))
            return (y - partial) * pow(a[-1], q - 2, q) % q
        partial = sum(c * x for c, x in zip(a[1:], known))
        return (y - partial) * pow(a[0], q - 2, q) % q
    for v in range(q):
        window = tuple(known) + (v,) if last else (v,) + tuple(known)
        if rule(window) == y:
            return v
    raise RuleError("rule is not permutive in the required variable")  # pragma: no cover


def preimage(rule: LocalRule, y, seed, position: int = 1) -> tuple[int, ...]:
    """Preimage of ``y`` agreeing with the ``(d-1)``-cell ``seed`` at 1-based ``position``.

    The seed is expanded rightwards by solving for the last window cell and
    leftwards by solving for the first.
    """
    require_bipermutive(rule)
    y = tuple(int(c) for c in y)
    seed = tuple(int(c) for c in seed)
    d = rule.d
    if len(seed) != d - 1:
        raise ValueError(f"seed must have {d - 1} cells, got {len(seed)}")
    m = len(y)
    if not 1 <= position <= m + 1:
        raise ValueError(f"seed position {position} out of range 1..{m + 1}")
    x: list[int | None] = [None] * (m + d - 1)
    p = position - 1
    x[p:p + d - 1] = seed
    for k in range(p + d - 1, m + d - 1):
        x[k] = _solve_cell(rule, x[k - d + 1:k], y[k - d + 1], last=True)
    for k in range(p - 1, -1, -1):
        x[k] = _solve_cell(rule, x[k + 1:k + d], y[k], last=False)
    return tuple(x)


def iterate_preimage(rule: LocalRule, y, steps: int, seeds, positions=None) -> tuple[int, ...]:
    """Apply :func:`preimage` ``steps`` times; seed ``i`` anchors step ``i`` (leftmost by default)."""
    seeds = list(seeds)
    if len(seeds) != steps:
        raise ValueError(f"need one seed per step: {steps} steps, {len(seeds)} seeds")
    positions = [1] * steps if positions is None else list(positions)
    if len(positions) != steps:
        raise ValueError("need one position per step")
    x = tuple(y)
    for seed, pos in zip(seeds, positions):
        x = preimage(rule, x, seed, pos)
    return x
