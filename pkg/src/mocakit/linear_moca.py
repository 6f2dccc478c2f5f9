"""Linear orthogonal CA: coprimality criterion, pair counts and maximal families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from mocakit.ca import (
    LocalRule, RuleError, associated_polynomial, evaluate, require_bipermutive, rule_from_polynomial,
)
from mocakit.designs import cayley_table, is_mols_family
from mocakit.gf import Polynomial, irreducibles, monic_polynomials, poly_gcd

ENUMERATION_LIMIT = 1 << 14


def _check_pair(f: LocalRule, g: LocalRule) -> None:
    if f.q != g.q:
        raise RuleError(f"field mismatch: GF({f.q}) vs GF({g.q})")
    if f.d != g.d:
        raise RuleError(f"diameter mismatch: {f.d} vs {g.d}")


def are_orthogonal_linear(f: LocalRule, g: LocalRule) -> bool:
    """Cayley tables of two linear bipermutive CA are orthogonal iff gcd(p_f, p_g) = 1."""
    _check_pair(f, g)
    require_bipermutive(f)
    require_bipermutive(g)
    return poly_gcd(associated_polynomial(f), associated_polynomial(g)).is_one()


def superposed_map(f: LocalRule, g: LocalRule, x) -> tuple[tuple[int, ...], tuple[int, ...]]:
    _check_pair(f, g)
    x = tuple(x)
    if len(x) != 2 * (f.d - 1):
        raise ValueError(f"input must have {2 * (f.d - 1)} cells, got {len(x)}")
    return evaluate(f, x), evaluate(g, x)


def count_coprime_pairs(q: int, n: int) -> int:
    """Unordered pairs of distinct coprime monic degree-``n`` polynomials with nonzero constant term."""
    if n < 1:
        raise ValueError("degree must be at least 1")
    val = Fraction(q * (q - 1) ** 3 * (q ** (2 * n - 2) - 1), q * q - 1) + (q - 1) * (q - 2)
    val /= 2
    if val.denominator != 1:  # pragma: no cover
        raise ArithmeticError("closed form did not produce an integer")
    return int(val)


def candidate_polynomials(q: int, n: int) -> list[Polynomial]:
    """Monic degree-``n`` polynomials with nonzero constant term, canonical order."""
    if (q - 1) * q ** (n - 1) > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration of degree-{n} polynomials over GF({q}) exceeds the size guard")
    return list(monic_polynomials(q, n, nonzero_constant=True))


def enumerate_coprime_pairs(q: int, n: int) -> list[tuple[Polynomial, Polynomial]]:
    cands = candidate_polynomials(q, n)
    return [(a, b) for a, b in itertools.combinations(cands, 2) if poly_gcd(a, b).is_one()]


@dataclass(frozen=True)
class MocaFamily:
    """Pairwise coprime monic degree-``n`` polynomials with nonzero constant terms."""

    q: int
    n: int
    polynomials: tuple[Polynomial, ...]

    def __post_init__(self):
        polys = tuple(self.polynomials)
        object.__setattr__(self, "polynomials", polys)
        for p in polys:
            if p.q != self.q or p.degree != self.n or p.lc != 1 or p.coeffs[0] == 0:
                raise ValueError(f"{p!r} is not monic of degree {self.n} with nonzero constant term")
        for a, b in itertools.combinations(polys, 2):
            if not poly_gcd(a, b).is_one():
                raise ValueError(f"{a!r} and {b!r} are not coprime")

    @property
    def size(self) -> int:
        return len(self.polynomials)

    @property
    def d(self) -> int:
        return self.n + 1

    def rules(self) -> list[LocalRule]:
        return [rule_from_polynomial(p) for p in self.polynomials]

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "size": self.size,
                "polynomials": [p.to_json() for p in self.polynomials]}

    @classmethod
    def from_json(cls, data: dict) -> MocaFamily:
        q, n = int(data["q"]), int(data["n"])
        fam = cls(q, n, tuple(Polynomial.from_json(c, q) for c in data["polynomials"]))
        if "size" in data and int(data["size"]) != fam.size:
            raise ValueError("family size field disagrees with the polynomial list")
        return fam


def max_family_size(q: int, n: int) -> int:
    """``I_n + sum_{k <= n/2} I_k`` counting only irreducibles with nonzero constant term."""
    degrees = [n] + list(range(1, n // 2 + 1))
    return sum(len(irreducibles(q, k, nonzero_constant=True)) for k in degrees)


def max_family(q: int, n: int) -> MocaFamily:
    """Build a maximum family of pairwise coprime polynomials.

    Starts with every irreducible of degree ``n``; then each irreducible ``P``
    of degree ``i <= n/2`` contributes ``P * Q`` with ``Q`` the
    lexicographically least monic cofactor keeping the family coprime and not
    touching the irreducibles still to be placed.
    """
    if n < 1:
        raise ValueError("degree must be at least 1")
    family = list(irreducibles(q, n, nonzero_constant=True))
    small = [p for i in range(1, n // 2 + 1) for p in irreducibles(q, i, nonzero_constant=True)]
    for idx, p in enumerate(small):
        pending = small[idx + 1:]
        k = n - p.degree
        for cof in monic_polynomials(q, k, nonzero_constant=True):
            cand = p * cof
            if all(poly_gcd(cand, m).is_one() for m in family) and \
                    all(poly_gcd(cof, r).is_one() for r in pending):
                family.append(cand)
                break
        else:  # pragma: no cover
            raise ArithmeticError(f"no cofactor of degree {k} found for {p!r}")
    return MocaFamily(q, n, tuple(family))


def is_extendable(family: MocaFamily) -> list[Polynomial]:
    """Candidates coprime to every member (empty list means the family is maximal)."""
    members = set(family.polynomials)
    return [c for c in candidate_polynomials(family.q, family.n)
            if c not in members and all(poly_gcd(c, m).is_one() for m in family.polynomials)]


def family_to_mols(family) -> list:
    rules = family.rules() if isinstance(family, MocaFamily) else list(family)
    squares = [cayley_table(r) for r in rules]
    if not is_mols_family(squares):
        raise ValueError("family does not yield mutually orthogonal Latin squares")
    return squares
