"""Secret sharing from orthogonal CA.

Threshold (2, n) scheme: the secret ``S`` and the dealer's randomness ``R``
are block indices; player ``i`` receives ``L_i(S, R)``, the output of rule
``i`` on ``decode(S) || decode(R)``. Any two players recover ``S`` either by
solving the Sylvester system (linear rules) or by walking the coupled de
Bruijn graph. Values are 0-based here and 1-based on the CLI.

Sequential scheme: ``c`` copies of an ``m``-cell secret are extended by
repeated preimage computation to ``k`` blocks of ``m`` cells, one per player.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from mocakit.ca import (
    LocalRule, RuleError, associated_polynomial, decode_block, encode_block, evaluate, format_config,
    iterate_preimage, parse_config, require_bipermutive,
)
from mocakit.designs import are_orthogonal, cayley_table
from mocakit.gf import poly_gcd, solve, sylvester_matrix
from mocakit.linear_moca import MocaFamily


class ShareError(ValueError):
    """Shares are inconsistent with the family (no or several preimages)."""


@dataclass(frozen=True)
class Share:
    player: int
    value: object

    def to_json(self) -> dict:
        if isinstance(self.value, tuple):
            return {"player": self.player, "value": format_config(self.value)}
        return {"player": self.player, "value": int(self.value) + 1}

    @classmethod
    def from_json(cls, data: dict) -> Share:
        v = data["value"]
        if isinstance(v, str):
            return cls(int(data["player"]), parse_config(v))
        return cls(int(data["player"]), int(v) - 1)


def _rules(family) -> list[LocalRule]:
    rules = family.rules() if isinstance(family, MocaFamily) else list(family)
    if not rules:
        raise ValueError("empty family")
    q, d = rules[0].q, rules[0].d
    for r in rules:
        if r.q != q or r.d != d:
            raise RuleError("family rules must share alphabet and diameter")
        require_bipermutive(r)
    return rules


def pair_orthogonal(f: LocalRule, g: LocalRule) -> bool:
    if f.coeffs is not None and g.coeffs is not None:
        return poly_gcd(associated_polynomial(f), associated_polynomial(g)).is_one()
    return are_orthogonal(cayley_table(f), cayley_table(g))


def validate_family(family) -> list[LocalRule]:
    rules = _rules(family)
    for a, b in itertools.combinations(range(len(rules)), 2):
        if not pair_orthogonal(rules[a], rules[b]):
            raise RuleError(f"rules {a + 1} and {b + 1} are not orthogonal")
    return rules


def deal(secret: int, randomness: int, family) -> list[Share]:
    rules = validate_family(family)
    q, d = rules[0].q, rules[0].d
    n = q ** (d - 1)
    for name, v in (("secret", secret), ("randomness", randomness)):
        if not 0 <= v < n:
            raise ValueError(f"{name} {v} out of range 0..{n - 1}")
    x = decode_block(secret, d - 1, q) + decode_block(randomness, d - 1, q)
    return [Share(i + 1, encode_block(evaluate(r, x), q)) for i, r in enumerate(rules)]


@dataclass(frozen=True)
class CoupledDeBruijnGraph:
    """De Bruijn graph whose edge ``(u, v)`` carries ``(f(u.v), g(u.v))``."""

    q: int
    d: int
    edges: dict

    @classmethod
    def build(cls, f: LocalRule, g: LocalRule) -> CoupledDeBruijnGraph:
        if f.q != g.q or f.d != g.d:
            raise RuleError("rules must share alphabet and diameter")
        edges = {}
        for w in itertools.product(range(f.q), repeat=f.d):
            edges[(w[:-1], w[1:])] = (f(w), g(w))
        return cls(f.q, f.d, edges)

    @property
    def vertices(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(self.q), repeat=self.d - 1))

    def successors(self, u):
        u = tuple(u)
        return [(u[1:] + (s,), self.edges[(u, u[1:] + (s,))]) for s in range(self.q)]

    def paths(self, labels) -> list[tuple[int, ...]]:
        """Every configuration whose vertex path reads ``labels``."""
        labels = list(labels)
        found = []
        stack = [(v, v) for v in reversed(self.vertices)]
        while stack:
            u, x = stack.pop()
            k = len(x) - (self.d - 1)
            if k == len(labels):
                found.append(x)
                continue
            for v, lab in reversed(self.successors(u)):
                if lab == labels[k]:
                    stack.append((v, x + v[-1:]))
        return found


def invert_coupled(f: LocalRule, g: LocalRule, w, z) -> tuple[int, ...]:
    """The unique ``x`` of ``2(d-1)`` cells with ``F(x) = w`` and ``G(x) = z``."""
    w, z = tuple(w), tuple(z)
    if len(w) != f.d - 1 or len(z) != f.d - 1:
        raise ValueError(f"outputs must have {f.d - 1} cells")
    graph = CoupledDeBruijnGraph.build(f, g)
    found = graph.paths(list(zip(w, z)))
    if not found:
        raise ShareError("no preimage: rules are not orthogonal or the outputs are corrupted")
    if len(found) > 1:
        raise ShareError(f"{len(found)} preimages: rules are not orthogonal")
    return found[0]


def reconstruct(share_i: Share, share_j: Share, family, method: str = "auto") -> int:
    """Recover the secret from two shares; ``method`` is linear, coupled or auto."""
    rules = _rules(family)
    if share_i.player == share_j.player:
        raise ValueError("shares must come from two different players")
    for s in (share_i, share_j):
        if not 1 <= s.player <= len(rules):
            raise ValueError(f"player {s.player} out of range 1..{len(rules)}")
    f, g = rules[share_i.player - 1], rules[share_j.player - 1]
    q, d = f.q, f.d
    n = q ** (d - 1)
    for s in (share_i, share_j):
        if not 0 <= int(s.value) < n:
            raise ValueError(f"share value {s.value} out of range 0..{n - 1}")
    w, z = decode_block(share_i.value, d - 1, q), decode_block(share_j.value, d - 1, q)
    if method == "auto":
        method = "linear" if f.coeffs is not None and g.coeffs is not None else "coupled"
    if method == "linear":
        if f.coeffs is None or g.coeffs is None:
            raise RuleError("the linear path needs linear rules")
        x = solve(sylvester_matrix(f.coeffs, g.coeffs, q), w + z)
        if x is None:
            raise ShareError("singular Sylvester matrix: rules are not orthogonal")
        x = tuple(int(c) for c in x)
        # a square system always solves, so check the answer forward
        if evaluate(f, x) != w or evaluate(g, x) != z:  # pragma: no cover
            raise ShareError("solution fails forward verification")
    elif method == "coupled":
        x = invert_coupled(f, g, w, z)
    else:
        raise ValueError(f"unknown method {method!r}")
    return encode_block(x[:d - 1], q)


def secrecy_audit(family_or_squares, player: int) -> dict[int, list[int]]:
    """For each share value of ``player``, the sorted multiset of secrets producing it."""
    items = family_or_squares.rules() if isinstance(family_or_squares, MocaFamily) \
        else list(family_or_squares)
    squares = [cayley_table(x) if isinstance(x, LocalRule) else np.asarray(x) for x in items]
    if not 1 <= player <= len(squares):
        raise ValueError(f"player {player} out of range 1..{len(squares)}")
    sq = squares[player - 1]
    table: dict[int, Counter] = {}
    for s in range(sq.shape[0]):
        for r in range(sq.shape[1]):
            table.setdefault(int(sq[s, r]), Counter())[s] += 1
    return {b: sorted(c.elements()) for b, c in sorted(table.items())}


def audit_is_uniform(table: dict[int, list[int]], n: int) -> bool:
    """Every share value is produced by each secret exactly once."""
    return len(table) == n and all(v == list(range(n)) for v in table.values())


def sequential_steps(m: int, k: int, copies: int, d: int) -> int:
    """Preimage iterations taking ``copies * m`` cells to ``k * m`` cells."""
    if m < 1 or copies < 1 or k < copies:
        raise ValueError("need m >= 1 and 1 <= copies <= k")
    extra = (k - copies) * m
    if extra % (d - 1):
        raise ValueError(f"(k - copies) * m = {extra} is not a multiple of d - 1 = {d - 1}")
    return extra // (d - 1)


def sequential_deal(secret, rule: LocalRule, k: int, copies: int = 1, seeds=None,
                    positions=None) -> list[Share]:
    """Split the preimage of ``copies`` juxtaposed secrets into ``k`` blocks.

    ``seeds`` holds one ``(d-1)``-cell block per preimage step.
    """
    require_bipermutive(rule)
    secret = tuple(int(c) for c in secret)
    t = sequential_steps(len(secret), k, copies, rule.d)
    if seeds is None:
        raise ValueError(f"need {t} seed blocks")
    x = iterate_preimage(rule, secret * copies, t, list(seeds), positions)
    m = len(secret)
    return [Share(i + 1, x[i * m:(i + 1) * m]) for i in range(k)]


def sequential_reconstruct(shares, rule: LocalRule, steps: int):
    """Concatenate adjacent share blocks and evolve ``steps`` times."""
    shares = list(shares)
    blocks = [tuple(s.value) if isinstance(s, Share) else tuple(s) for s in shares]
    if isinstance(shares[0], Share):
        players = [s.player for s in shares]
        if players != list(range(players[0], players[0] + len(players))):
            raise ValueError("shares must be adjacent and in order")
    x = tuple(itertools.chain.from_iterable(blocks))
    for _ in range(steps):
        if len(x) < rule.d:
            raise ValueError(f"{steps} steps need more cells than the {len(x)} given")
        x = evaluate(rule, x)
    return x
