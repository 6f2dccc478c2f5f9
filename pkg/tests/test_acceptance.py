"""Acceptance suite: one test per criterion, each timed against its budget.

Run with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``;
a pass/fail line per criterion is printed at the end.
"""

import itertools
import os
import sys
import time
from contextlib import contextmanager

if __name__ == "__main__":
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from mocakit.boolfun import (
    BooleanFunction, bent_from_family, ci_function_from_family, ci_order, is_bent, nonlinearity,
    walsh_transform,
)
from mocakit.ca import (
    LocalRule, decode_block, evaluate, format_config, parse_config, preimage, rule_from_polynomial,
)
from mocakit.cli import main
from mocakit.designs import cayley_table, is_latin_square, oa_strength
from mocakit.gf import (
    Polynomial, is_irreducible, is_primitive, matrix_order, minimal_polynomial, sylvester_matrix,
)
from mocakit.linear_moca import (
    MocaFamily, are_orthogonal_linear, count_coprime_pairs, enumerate_coprime_pairs, max_family,
)
from mocakit.nonlinear_moca import (
    RulePair, count_pairwise_balanced, enumerate_codes, is_pairwise_balanced, rule_from_index,
    search_orthogonal,
)
from mocakit.prng import OcaPrng, cycle_length, cycle_report, verify_cycle_report
from mocakit.sss import audit_is_uniform, deal, reconstruct, secrecy_audit
from tests import acceptance_log
from tests.oracles import (
    all_monic, brute_gcd, brute_orthogonal, brute_pairwise_balanced, brute_square,
)

R90 = LocalRule.linear((1, 0, 1))
R150 = LocalRule.linear((1, 1, 1))


@contextmanager
def criterion(num, budget):
    """Time the block, record the outcome, then fail if over budget."""
    state = {"detail": "", "ok": True}
    start = time.perf_counter()
    try:
        yield state
    except BaseException as exc:
        acceptance_log.record(num, False, f"{type(exc).__name__}: {exc}"[:160],
                              time.perf_counter() - start)
        raise
    secs = time.perf_counter() - start
    ok = state["ok"] and secs < budget
    detail = state["detail"] + ("" if secs < budget else f" [over budget {budget}s]")
    acceptance_log.record(num, ok, detail, secs)
    assert secs < budget, f"criterion {num} took {secs:.1f}s, budget {budget}s"


def linear_bipermutive(q, d):
    nz = range(1, q)
    for c in itertools.product(nz, *[range(q)] * (d - 2), nz):
        yield LocalRule.linear(c, q)


def binary_bipermutive(d):
    return [rule_from_index(d, phi) for phi in range(1 << (1 << (d - 2)))]


def test_ac01_reference_outputs(capsys):
    with criterion(1, 1.0) as st:
        assert main(["latin", "--rule", "wolfram:150:d3"]) == 0
        out = capsys.readouterr().out
        assert out == "1 4 3 2\n2 3 4 1\n4 1 2 3\n3 2 1 4\n"
        assert format_config(evaluate(R150, parse_config("100001"))) == "1001"
        f = LocalRule.linear((1, 0, 1, 0, 1))
        assert format_config(evaluate(f, parse_config("01001011"))) == "1101"
        x = preimage(R150, parse_config("100110"), (0, 1), position=5)
        assert format_config(x) == "10000101"
        st["detail"] = "square, 100001->1001, 01001011->1101, preimage 10000101"


def test_ac02_latin_exhaustive():
    with criterion(2, 10.0) as st:
        checked = failures = 0
        rules = binary_bipermutive(3) + binary_bipermutive(4)
        rules += list(linear_bipermutive(3, 2)) + list(linear_bipermutive(3, 3))
        for rule in rules:
            sq = cayley_table(rule)
            assert np.array_equal(sq, brute_square(rule))
            failures += not is_latin_square(sq)
            checked += 1
        assert checked == 4 + 16 + 4 + 12
        assert failures == 0
        st["detail"] = f"{checked} rules, {failures} failures"


def test_ac03_gcd_criterion():
    with criterion(3, 60.0) as st:
        pairs = disagreements = 0
        for q, d in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)]:
            rules = list(linear_bipermutive(q, d))
            squares = [brute_square(r) for r in rules]
            for a, b in itertools.product(range(len(rules)), repeat=2):
                verdict = are_orthogonal_linear(rules[a], rules[b])
                disagreements += verdict != brute_orthogonal(squares[a], squares[b])
                pairs += 1
        assert disagreements == 0
        st["detail"] = f"{pairs} ordered pairs, {disagreements} disagreements"


def test_ac04_pair_counts():
    with criterion(4, 60.0) as st:
        seq = [len(enumerate_coprime_pairs(2, n)) for n in range(1, 6)]
        assert seq == [0, 1, 5, 21, 85]
        assert seq == [count_coprime_pairs(2, n) for n in range(1, 6)]
        ternary = [len(enumerate_coprime_pairs(3, n)) for n in range(1, 4)]
        assert ternary == [count_coprime_pairs(3, n) for n in range(1, 4)]
        # independent count at small sizes with the exhaustive gcd oracle
        for q, n in [(2, 2), (2, 3), (3, 2)]:
            cands = [p for p in all_monic(q, n) if p.coeffs[0]]
            brute = sum(brute_gcd(a, b).is_one() for a, b in itertools.combinations(cands, 2))
            assert brute == count_coprime_pairs(q, n)
        st["detail"] = f"q=2: {seq}; q=3: {ternary}"


def test_ac05_maximal_families():
    with criterion(5, 60.0) as st:
        sizes = []
        for n in range(1, 5):
            fam = max_family(2, n)
            sizes.append(fam.size)
            for a, b in itertools.combinations(fam.polynomials, 2):
                assert brute_gcd(a, b).is_one()
            members = set(fam.polynomials)
            for c in all_monic(2, n):
                if c.coeffs[0] and c not in members:
                    assert any(not brute_gcd(c, m).is_one() for m in members)
        assert sizes == [1, 2, 3, 5]
        st["detail"] = f"sizes {sizes}, coprime and unextendable"


def test_ac06_balanced_counts():
    with criterion(6, 60.0) as st:
        counts = []
        for d in (3, 4):
            rules = binary_bipermutive(d)
            n = sum(brute_pairwise_balanced(f, g) for f, g in itertools.product(rules, repeat=2))
            assert n == count_pairwise_balanced(d)
            counts.append(n)
        assert counts == [8, 96]
        codes = sum(1 for _ in enumerate_codes(5))
        assert codes == 17920 == count_pairwise_balanced(5)
        st["detail"] = f"d=3: {counts[0]}, d=4: {counts[1]}, d=5 codes: {codes}"


def test_ac07_orthogonal_implies_balanced():
    with criterion(7, 300.0) as st:
        orth = bad = 0
        for d in (3, 4):
            rules = binary_bipermutive(d)
            squares = [brute_square(r) for r in rules]
            for a, b in itertools.product(range(len(rules)), repeat=2):
                if brute_orthogonal(squares[a], squares[b]):
                    orth += 1
                    bad += not brute_pairwise_balanced(rules[a], rules[b])
        assert bad == 0
        st["detail"] = f"{orth} orthogonal ordered pairs, {bad} counterexamples"


def test_ac08_secret_sharing():
    with criterion(8, 1.0) as st:
        fam = [R90, R150]
        trips = 0
        for s, r in itertools.product(range(4), repeat=2):
            shares = deal(s, r, fam)
            for a, b in itertools.permutations(shares, 2):
                assert reconstruct(a, b, fam, method="linear") == s
                assert reconstruct(a, b, fam, method="coupled") == s
            trips += 1
        assert trips == 16
        for player in (1, 2):
            assert audit_is_uniform(secrecy_audit(fam, player), 4)
        st["detail"] = "16 round trips on both paths, audit uniform for players 1 and 2"


def _max_cycle(prng):
    return max(cycle_length(prng, decode_block(s, prng.width)) for s in range(1, prng.states))


def test_ac09_prng_periods():
    with criterion(9, 300.0) as st:
        pairs = 0
        full = []
        low_degree = []
        for n in (2, 3, 4):
            for a, b in enumerate_coprime_pairs(2, n):
                prng = OcaPrng(rule_from_polynomial(a), rule_from_polynomial(b))
                m = sylvester_matrix(prng.f.coeffs, prng.g.coeffs, 2)
                order = matrix_order(m)
                assert _max_cycle(prng) == order
                mp = minimal_polynomial(m)
                if is_irreducible(mp) and is_primitive(mp):
                    assert order == 2 ** mp.degree - 1
                    if mp.degree == 2 * n:
                        assert order == 2 ** (2 * n) - 1
                        full.append(n)
                    else:
                        low_degree.append((n, mp.degree, order))
                pairs += 1
        assert full
        st["detail"] = (f"{pairs} pairs: max cycle = order; {len(full)} full-degree primitive pairs "
                        f"reach 2^2n-1; literal reading fails on {len(low_degree)} pairs whose "
                        f"primitive minimal polynomial has degree < 2n")


@pytest.mark.xfail(strict=True, reason="a primitive minimal polynomial of degree k < 2n gives "
                                       "order 2^k - 1, not 2^2n - 1")
def test_ac09_literal_primitive_claim():
    for n in (3, 4):
        for a, b in enumerate_coprime_pairs(2, n):
            m = sylvester_matrix(rule_from_polynomial(a).coeffs, rule_from_polynomial(b).coeffs, 2)
            mp = minimal_polynomial(m)
            if is_irreducible(mp) and is_primitive(mp):
                assert matrix_order(m) == 2 ** (2 * n) - 1, (a, b, mp)


def test_ac10_bent():
    with criterion(10, 1.0) as st:
        f1 = bent_from_family(MocaFamily(2, 1, (Polynomial([1, 1], 2),)), 1)
        and2 = BooleanFunction(2, [0, 0, 0, 1])
        assert f1 == and2 and is_bent(f1) and nonlinearity(f1) == 1
        f2 = bent_from_family(max_family(2, 2), 2)
        assert np.all(np.abs(walsh_transform(f2)) == 4)
        assert nonlinearity(f2) == 6 == 2 ** 3 - 2 ** 1
        st["detail"] = "b=1 AND nl=1; b=2 |W|=4 everywhere, nl=6"


def _maximal_families(q, n):
    """Every maximal pairwise-coprime family, by brute-force clique search."""
    cands = [p for p in all_monic(q, n) if p.coeffs[0]]
    ok = {(a, b): brute_gcd(a, b).is_one() for a, b in itertools.permutations(cands, 2)}
    fams = []
    for k in range(len(cands), 0, -1):
        for combo in itertools.combinations(cands, k):
            if all(ok[a, b] for a, b in itertools.combinations(combo, 2)) and \
                    not any(set(combo) < set(f) for f in fams):
                fams.append(combo)
    return fams


def test_ac11_correlation_immune():
    with criterion(11, 120.0) as st:
        d3 = _maximal_families(2, 2)
        for fam in d3:
            f = ci_function_from_family(MocaFamily(2, 2, fam))
            rows = f.support_rows()
            assert oa_strength(rows, symbols=2) >= 2
        three = [fam for fam in _maximal_families(2, 3) if len(fam) == 3]
        assert len(three) == 2
        outputs, full = [], []
        for fam in three:
            family = MocaFamily(2, 3, fam)
            outputs.append(ci_order(ci_function_from_family(family, coordinates=False)))
            full.append(ci_order(ci_function_from_family(family)))
        assert min(outputs) >= 3
        st["detail"] = (f"d=3: {len(d3)} maximal families, strength >= 2; d=4: {len(three)} "
                        f"3-member families, CI order on output columns {outputs} "
                        f"(with coordinate columns {full})")


def test_ac12_search_and_cycle_validation():
    with criterion(12, 600.0) as st:
        hits_total = reports = 0
        for d in (3, 4, 5):
            squares = {}
            for hit in search_orthogonal(d):
                for r in (hit.f, hit.g):
                    if r not in squares:
                        squares[r] = brute_square(r)
                assert brute_orthogonal(squares[hit.f], squares[hit.g])
                assert is_pairwise_balanced(RulePair(hit.f, hit.g))
                prng = OcaPrng(hit.f, hit.g)
                assert verify_cycle_report(prng, cycle_report(prng))
                hits_total += 1
                reports += 1
        st["detail"] = (f"{hits_total} search hits at d=3..5 re-verified; {reports} cycle reports "
                        f"re-verified by iteration; large-scale totals not asserted")


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
