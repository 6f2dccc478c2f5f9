"""Pairwise balanced bipermutive rule pairs and exhaustive orthogonality search.

A binary bipermutive rule of diameter ``d`` is ``x_1 + phi(centre) + x_d``
with ``phi`` a function of ``d - 2`` variables, stored as an integer whose bit
``c`` is ``phi`` on centre block ``c`` (``x_2`` most significant). A pair
``(f, g)`` is pairwise balanced exactly when ``phi + gamma`` is balanced, so
ordered pairs are coded by a balanced "component type" string
``phi + gamma`` and an "orientation" string ``phi``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from mocakit import kernels
from mocakit.boolfun import BooleanFunction, nonlinearity
from mocakit.ca import LocalRule, RuleError, extract_generating, from_generating, require_bipermutive

MAX_D = 6
LONG_D = 6


@dataclass(frozen=True)
class RulePair:
    f: LocalRule
    g: LocalRule

    def __post_init__(self):
        for r in (self.f, self.g):
            if r.q != 2:
                raise RuleError("rule pairs are binary")
            require_bipermutive(r)
        if self.f.d != self.g.d:
            raise RuleError(f"diameter mismatch: {self.f.d} vs {self.g.d}")

    @property
    def d(self) -> int:
        return self.f.d

    def swapped(self) -> RulePair:
        return RulePair(self.g, self.f)

    def codes(self) -> tuple[int, int]:
        return self.f.wolfram_code, self.g.wolfram_code


def _bits(value: int, length: int) -> tuple[int, ...]:
    return tuple((value >> i) & 1 for i in range(length))


def _from_bits(bits) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def rule_from_index(d: int, phi: int) -> LocalRule:
    return from_generating(_bits(phi, 1 << (d - 2)))


def rule_index(rule: LocalRule) -> int:
    return _from_bits(extract_generating(rule))


@dataclass(frozen=True)
class BalancedPairCode:
    """``component_types`` is ``phi + gamma`` (balanced); ``orientations`` is ``phi``."""

    d: int
    component_types: tuple[int, ...]
    orientations: tuple[int, ...]

    def __post_init__(self):
        if self.d < 3:
            raise ValueError("balanced pair codes need d >= 3")
        length = 1 << (self.d - 2)
        t, o = tuple(self.component_types), tuple(self.orientations)
        if len(t) != length or len(o) != length:
            raise ValueError(f"bit strings must have length {length}")
        if any(b not in (0, 1) for b in t + o):
            raise ValueError("bit strings must be binary")
        if sum(t) != length // 2:
            raise ValueError("component types must be balanced")
        object.__setattr__(self, "component_types", t)
        object.__setattr__(self, "orientations", o)

    def decode(self) -> RulePair:
        gamma = tuple(a ^ b for a, b in zip(self.orientations, self.component_types))
        return RulePair(from_generating(self.orientations), from_generating(gamma))

    @classmethod
    def encode(cls, pair: RulePair) -> BalancedPairCode:
        phi, gamma = extract_generating(pair.f), extract_generating(pair.g)
        return cls(pair.d, tuple(a ^ b for a, b in zip(phi, gamma)), phi)


def is_pairwise_balanced(pair: RulePair) -> bool:
    """Each value of ``x -> (f(x), g(x))`` has exactly ``2**(d-2)`` preimages."""
    f, g = pair.f.full_table(), pair.g.full_table()
    counts = np.bincount(np.array(f) * 2 + np.array(g), minlength=4)
    return bool(np.all(counts == 1 << (pair.d - 2)))


def generating_condition(phi, gamma) -> bool:
    """True iff ``(phi, gamma)`` is balanced as a 2-bit map.

    Sufficient for the induced rules to be pairwise balanced, not necessary;
    with fewer than two variables it can never hold.
    """
    phi, gamma = tuple(phi), tuple(gamma)
    if len(phi) != len(gamma):
        raise ValueError("generating functions must have the same number of variables")
    if len(phi) < 4:
        return False
    counts = np.bincount(np.array(phi) * 2 + np.array(gamma), minlength=4)
    return bool(np.all(counts == len(phi) // 4))


def count_pairwise_balanced(d: int) -> int:
    """Ordered pairwise balanced pairs of bipermutive rules of diameter ``d``."""
    if d < 3:
        raise ValueError("d must be at least 3")
    length = 1 << (d - 2)
    return math.comb(length, length // 2) * (1 << length)


def _check_d(d: int) -> None:
    if not 3 <= d <= MAX_D:
        raise ValueError(f"d must be in 3..{MAX_D}, got {d}")


def type_masks(d: int) -> list[int]:
    """Balanced component-type strings as integers, canonical order."""
    length = 1 << (d - 2)
    return [sum(1 << i for i in ones) for ones in itertools.combinations(range(length), length // 2)]


def enumerate_codes(d: int) -> Iterator[BalancedPairCode]:
    _check_d(d)
    length = 1 << (d - 2)
    for t in type_masks(d):
        tb = _bits(t, length)
        for o in range(1 << length):
            yield BalancedPairCode(d, tb, _bits(o, length))


def enumerate_pairwise_balanced(d: int) -> Iterator[RulePair]:
    for code in enumerate_codes(d):
        yield code.decode()


def _rule_images(d: int) -> np.ndarray:
    """Cayley-table images of all ``2**(2**(d-2))`` bipermutive rules, one row each."""
    nrules = 1 << (1 << (d - 2))
    width = 2 * (d - 1)
    out = np.empty((nrules, 1 << width), dtype=np.uint8)
    for phi in range(nrules):
        table = np.array(rule_from_index(d, phi).full_table(), dtype=np.uint8)
        out[phi] = kernels.binary_ca_image(table, d, width)
    return out


@dataclass(frozen=True)
class SearchHit:
    pair: RulePair
    nl_f: int
    nl_g: int
    certificate: str

    @property
    def f(self) -> LocalRule:
        return self.pair.f

    @property
    def g(self) -> LocalRule:
        return self.pair.g

    def to_json(self) -> dict:
        f, g = self.pair.codes()
        return {"d": self.pair.d, "f": f, "g": g, "nl_f": self.nl_f, "nl_g": self.nl_g,
                "certificate": self.certificate}

    @classmethod
    def from_json(cls, data: dict) -> SearchHit:
        d = int(data["d"])
        pair = RulePair(LocalRule.wolfram(int(data["f"]), d), LocalRule.wolfram(int(data["g"]), d))
        return cls(pair, int(data["nl_f"]), int(data["nl_g"]), data["certificate"])

    def format_line(self) -> str:
        f, g = self.pair.codes()
        return f"{f} {g} nl={self.nl_f},{self.nl_g} cert={self.certificate}"


def certificate(f: LocalRule, g: LocalRule) -> str:
    """Short digest of the superposed Cayley tables (row-major ``N*F + G``)."""
    width = 2 * (f.d - 1)
    n = 1 << (f.d - 1)
    a = kernels.binary_ca_image(np.array(f.full_table(), dtype=np.uint8), f.d, width).astype(np.int64)
    b = kernels.binary_ca_image(np.array(g.full_table(), dtype=np.uint8), g.d, width).astype(np.int64)
    # reorder to row-major Cayley layout (row = left block)
    codes = (a * n + b).reshape(n, n).T.ravel()
    return hashlib.sha256(codes.astype("<u2").tobytes()).hexdigest()[:16]


def _load_checkpoint(path, meta) -> dict:
    if path is None or not os.path.exists(path):
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if data.get("meta") != meta:
        raise ValueError(f"checkpoint {path} was written for different search parameters")
    return {int(k): [tuple(p) for p in v] for k, v in data["done"].items()}


def _save_checkpoint(path, meta, done) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump({"meta": meta, "done": {str(k): v for k, v in sorted(done.items())}}, fh)
    os.replace(tmp, path)


def search_orthogonal(d: int, nonlinear_only: bool = False, threads: int = 1,
                      checkpoint: str | None = None, allow_long: bool = False,
                      chunk: int = 64, progress=None) -> list[SearchHit]:
    """All ordered pairwise balanced pairs whose Cayley tables are orthogonal.

    Results are sorted by Wolfram codes, so the output does not depend on
    ``threads`` or on resuming from ``checkpoint``. ``d = 6`` needs
    ``allow_long``.
    """
    _check_d(d)
    if d >= LONG_D and not allow_long:
        raise ValueError(f"d={d} is a long-running search; pass allow_long=True")
    if threads < 1:
        raise ValueError("threads must be positive")
    n = 1 << (d - 1)
    length = 1 << (d - 2)
    images = _rule_images(d)
    masks = type_masks(d)
    chunks = [masks[i:i + chunk] for i in range(0, len(masks), chunk)]
    meta = {"d": d, "chunk": chunk}
    done = _load_checkpoint(checkpoint, meta)
    orient = np.arange(1 << length, dtype=np.int64)

    def work(idx):
        found = []
        for t in chunks[idx]:
            ok = kernels.batch_orthogonal(images, orient, orient ^ t, n)
            found.extend((int(o), int(o) ^ t) for o in np.flatnonzero(ok))
        return idx, found

    lock = threading.Lock()

    def record(idx, found):
        with lock:
            done[idx] = found
            if checkpoint is not None:
                _save_checkpoint(checkpoint, meta, done)
            if progress is not None:
                progress(len(done), len(chunks))

    todo = [i for i in range(len(chunks)) if i not in done]
    if threads == 1:
        for i in todo:
            record(*work(i))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for idx, found in pool.map(work, todo):
                record(idx, found)

    nl_cache: dict[int, int] = {}

    def nl(phi):
        if phi not in nl_cache:
            nl_cache[phi] = nonlinearity(BooleanFunction.from_rule(rule_from_index(d, phi)))
        return nl_cache[phi]

    hits = []
    for idx in range(len(chunks)):
        for phi, gamma in done[idx]:
            a, b = nl(phi), nl(gamma)
            if nonlinear_only and (a == 0 or b == 0):
                continue
            f, g = rule_from_index(d, phi), rule_from_index(d, gamma)
            hits.append(SearchHit(RulePair(f, g), a, b, certificate(f, g)))
    hits.sort(key=lambda h: h.pair.codes())
    return hits
