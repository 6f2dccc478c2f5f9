"""Pseudorandom generator from the superposed map of an orthogonal CA pair.

The state is a configuration of ``2(d-1)`` cells; one step replaces it with
``F(state) || G(state)``. The keystream emits the ``F`` half of each new
state. States are encoded with the leftmost cell least significant.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from mocakit import kernels
from mocakit.boolfun import table_to_hex
from mocakit.ca import LocalRule, RuleError, decode_block, evaluate, global_image
from mocakit.gf import (
    is_irreducible, is_primitive, matrix_order, minimal_polynomial, sylvester_matrix,
)
from mocakit.sss import pair_orthogonal

STATE_LIMIT = 1 << 26


@dataclass(frozen=True)
class OcaPrng:
    f: LocalRule
    g: LocalRule

    def __post_init__(self):
        if self.f.q != self.g.q or self.f.d != self.g.d:
            raise RuleError("rules must share alphabet and diameter")
        if not pair_orthogonal(self.f, self.g):
            raise RuleError(f"rules {self.f} and {self.g} are not orthogonal")

    @property
    def q(self) -> int:
        return self.f.q

    @property
    def width(self) -> int:
        return 2 * (self.f.d - 1)

    @property
    def states(self) -> int:
        return self.q ** self.width

    def step(self, state) -> tuple[int, ...]:
        state = tuple(state)
        if len(state) != self.width:
            raise ValueError(f"state must have {self.width} cells, got {len(state)}")
        return evaluate(self.f, state) + evaluate(self.g, state)

    def permutation(self) -> np.ndarray:
        """The superposed map on encoded states."""
        if self.states > STATE_LIMIT:
            raise ValueError(f"{self.states} states exceed the enumeration guard")
        n = self.q ** (self.f.d - 1)
        return global_image(self.f, self.width) + n * global_image(self.g, self.width)

    def keystream(self, seed, blocks: int) -> list[tuple[int, ...]]:
        state = tuple(seed)
        out = []
        half = self.f.d - 1
        for _ in range(blocks):
            state = self.step(state)
            out.append(state[:half])
        return out

    def keystream_bits(self, seed, nbits: int) -> list[int]:
        half = self.f.d - 1
        blocks = self.keystream(seed, -(-nbits // half))
        return list(itertools.chain.from_iterable(blocks))[:nbits]

    def to_json(self) -> dict:
        return {"f": self.f.to_json(), "g": self.g.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> OcaPrng:
        return cls(LocalRule.from_json(data["f"]), LocalRule.from_json(data["g"]))


def stream_hex(bits) -> str:
    return table_to_hex(bits)


def cycle_length(prng: OcaPrng, seed) -> int:
    seed = tuple(seed)
    state = prng.step(seed)
    e = 1
    while state != seed:
        state = prng.step(state)
        e += 1
    return e


def cycle_structure(prng: OcaPrng) -> list[tuple[int, int]]:
    """``(length, count)`` pairs of the full cycle decomposition, by length."""
    lengths = kernels.cycle_lengths(prng.permutation())
    return sorted(Counter(lengths).items())


@dataclass(frozen=True)
class CycleReport:
    structure: tuple[tuple[int, int], ...]
    max_cycle: int
    witness: tuple[int, ...]

    def to_json(self) -> dict:
        return {"structure": [list(p) for p in self.structure], "max_cycle": self.max_cycle,
                "witness": "".join(map(str, self.witness))}


def cycle_report(prng: OcaPrng) -> CycleReport:
    perm = prng.permutation()
    structure = tuple(sorted(Counter(kernels.cycle_lengths(perm)).items()))
    top = structure[-1][0]
    # find a state on a longest cycle
    seen = np.zeros(perm.size, dtype=bool)
    for s in range(perm.size):
        if seen[s]:
            continue
        x, ln = s, 0
        while not seen[x]:
            seen[x] = True
            x = int(perm[x])
            ln += 1
        if ln == top:
            return CycleReport(structure, top, decode_block(s, prng.width, prng.q))
    raise AssertionError("unreachable")  # pragma: no cover


def verify_cycle_report(prng: OcaPrng, report: CycleReport) -> bool:
    """Re-check a report by direct iteration of the step map."""
    if sum(a * b for a, b in report.structure) != prng.states:
        return False
    return cycle_length(prng, report.witness) == report.max_cycle


@dataclass(frozen=True)
class PeriodReport:
    order: int
    minimal_polynomial: tuple[int, ...]
    primitive: bool
    full_degree: bool
    max_period: int
    achieves_max: bool

    def to_json(self) -> dict:
        return {"order": self.order, "minimal_polynomial": list(self.minimal_polynomial),
                "primitive": self.primitive, "full_degree": self.full_degree,
                "max_period": self.max_period, "achieves_max": self.achieves_max}


def max_period_report(prng: OcaPrng) -> PeriodReport:
    """Order and minimal polynomial of the Sylvester matrix of a linear pair.

    The period ``q**(2n) - 1`` is reached exactly when the minimal polynomial
    is primitive of full degree ``2n``; a primitive minimal polynomial of
    lower degree ``k`` only gives order ``q**k - 1``.
    """
    f, g = prng.f, prng.g
    if f.coeffs is None or g.coeffs is None:
        raise RuleError("period reports need a linear pair")
    m = sylvester_matrix(f.coeffs, g.coeffs, f.q)
    order = matrix_order(m)
    mp = minimal_polynomial(m)
    primitive = mp.coeffs[0] != 0 and is_irreducible(mp) and is_primitive(mp)
    full = f.q ** prng.width - 1
    full_degree = mp.degree == prng.width
    if primitive:
        assert order == f.q ** mp.degree - 1, "primitive minimal polynomial with unexpected order"
    assert (order == full) == (primitive and full_degree), "period characterization violated"
    return PeriodReport(order, mp.coeffs, primitive, full_degree, full, order == full)


def is_multipermutation(prng: OcaPrng) -> bool:
    """Any two of (left half, right half, F, G) determine the input."""
    perm_f = global_image(prng.f, prng.width)
    perm_g = global_image(prng.g, prng.width)
    n = prng.q ** (prng.f.d - 1)
    x = np.arange(prng.states, dtype=np.int64)
    cols = [x % n, x // n, perm_f, perm_g]
    for a, b in itertools.combinations(cols, 2):
        if np.unique(a * n + b).size != prng.states:
            return False
    return True
