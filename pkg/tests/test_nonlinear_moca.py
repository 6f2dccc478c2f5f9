import hashlib
import itertools
import json

import numpy as np
import pytest

from mocakit.boolfun import BooleanFunction, nonlinearity
from mocakit.ca import LocalRule, RuleError, from_generating
from mocakit.designs import are_orthogonal, cayley_table
from mocakit.nonlinear_moca import (
    BalancedPairCode, RulePair, SearchHit, certificate, count_pairwise_balanced,
    enumerate_codes, enumerate_pairwise_balanced, generating_condition, is_pairwise_balanced,
    rule_from_index, rule_index, search_orthogonal,
)
from tests.oracles import brute_pairwise_balanced


def W(code, d=3):
    return LocalRule.wolfram(code, d)


def all_bipermutive(d):
    return [rule_from_index(d, phi) for phi in range(1 << (1 << (d - 2)))]


def all_pairs(d):
    rules = all_bipermutive(d)
    return [RulePair(f, g) for f, g in itertools.product(rules, repeat=2)]


def test_rule_pair_validation():
    with pytest.raises(RuleError):
        RulePair(W(30), W(150))
    with pytest.raises(RuleError):
        RulePair(W(150), rule_from_index(4, 0))
    assert RulePair(W(90), W(150)).swapped().codes() == (150, 90)


def test_index_roundtrip():
    for d in (3, 4, 5):
        for phi in range(1 << (1 << (d - 2))):
            assert rule_index(rule_from_index(d, phi)) == phi
    assert rule_from_index(3, 0).wolfram_code == 90
    assert rule_from_index(3, 2).wolfram_code == 150


def test_pairwise_balanced_examples():
    assert is_pairwise_balanced(RulePair(W(90), W(150)))
    assert not is_pairwise_balanced(RulePair(W(150), W(150)))
    assert not is_pairwise_balanced(RulePair(W(90), W(165)))


@pytest.mark.parametrize("d,expected", [(3, 8), (4, 96)])
def test_count_matches_brute_force(d, expected):
    brute = [p for p in all_pairs(d) if brute_pairwise_balanced(p.f, p.g)]
    assert len(brute) == expected == count_pairwise_balanced(d)
    assert all(is_pairwise_balanced(p) for p in brute)


def test_count_formula():
    assert count_pairwise_balanced(5) == 17920
    assert sum(1 for _ in enumerate_codes(5)) == 17920
    with pytest.raises(ValueError):
        count_pairwise_balanced(2)


@pytest.mark.parametrize("d", [3, 4])
def test_enumerator_complete(d):
    got = [p.codes() for p in enumerate_pairwise_balanced(d)]
    assert len(got) == len(set(got)) == count_pairwise_balanced(d)
    brute = {p.codes() for p in all_pairs(d) if brute_pairwise_balanced(p.f, p.g)}
    assert set(got) == brute
    if d == 3:
        assert (90, 150) in got


def test_enumerator_yields_balanced_pairs_d5():
    for i, pair in enumerate(enumerate_pairwise_balanced(5)):
        if i % 97 == 0:
            assert is_pairwise_balanced(pair)


def test_enumerator_range():
    with pytest.raises(ValueError):
        next(enumerate_pairwise_balanced(2))
    with pytest.raises(ValueError):
        next(enumerate_pairwise_balanced(7))


def test_code_roundtrip_and_validation():
    for pair in enumerate_pairwise_balanced(4):
        assert BalancedPairCode.encode(pair).decode() == pair
    with pytest.raises(ValueError):
        BalancedPairCode(3, (1, 1), (0, 0))
    with pytest.raises(ValueError):
        BalancedPairCode(3, (1, 0, 0), (0, 0, 0))
    with pytest.raises(ValueError):
        BalancedPairCode(2, (), ())


def test_generating_condition_d3():
    # one variable cannot carry a balanced 2-bit map, yet (90, 150) is pairwise balanced
    assert not generating_condition((0, 0), (0, 1))
    assert is_pairwise_balanced(RulePair(from_generating((0, 0)), from_generating((0, 1))))
    assert not generating_condition((0, 1), (0, 1))


def test_generating_condition_sufficient_d4():
    hits = 0
    for phi, gamma in itertools.product(itertools.product((0, 1), repeat=4), repeat=2):
        if generating_condition(phi, gamma):
            hits += 1
            assert is_pairwise_balanced(RulePair(from_generating(phi), from_generating(gamma)))
    assert hits == 24
    with pytest.raises(ValueError):
        generating_condition((0, 1), (0, 1, 1, 0))


def test_orthogonal_pairs_are_balanced_exhaustive():
    for d in (3, 4):
        rules = all_bipermutive(d)
        squares = [cayley_table(r) for r in rules]
        for a, b in itertools.product(range(len(rules)), repeat=2):
            if are_orthogonal(squares[a], squares[b]):
                assert is_pairwise_balanced(RulePair(rules[a], rules[b]))


def test_search_d3():
    hits = search_orthogonal(3)
    assert len(hits) == 8
    assert all(h.nl_f == 0 and h.nl_g == 0 for h in hits)
    assert search_orthogonal(3, nonlinear_only=True) == []
    assert (90, 150) in {h.pair.codes() for h in hits}


def brute_search(d):
    rules = all_bipermutive(d)
    squares = [cayley_table(r) for r in rules]
    return {(rules[a].wolfram_code, rules[b].wolfram_code)
            for a, b in itertools.product(range(len(rules)), repeat=2)
            if are_orthogonal(squares[a], squares[b])}


def test_search_d4_matches_brute_force():
    hits = search_orthogonal(4)
    assert {h.pair.codes() for h in hits} == brute_search(4)
    nl = search_orthogonal(4, nonlinear_only=True)
    for h in nl:
        assert are_orthogonal(cayley_table(h.f), cayley_table(h.g))
        assert h.nl_f > 0 and h.nl_g > 0
        assert h.nl_f == nonlinearity(BooleanFunction.from_rule(h.f))
    codes = {h.pair.codes() for h in hits}
    assert all((g, f) in codes for f, g in codes)


def test_search_determinism_threads_and_checkpoint(tmp_path):
    ref = search_orthogonal(5, chunk=16)
    assert search_orthogonal(5, threads=4, chunk=16) == ref
    ck = tmp_path / "ck.json"
    search_orthogonal(5, chunk=16, checkpoint=str(ck))
    data = json.loads(ck.read_text())
    assert data["meta"] == {"d": 5, "chunk": 16}
    # drop half the chunks and resume
    keys = sorted(data["done"], key=int)
    data["done"] = {k: data["done"][k] for k in keys[: len(keys) // 2]}
    ck.write_text(json.dumps(data))
    assert search_orthogonal(5, chunk=16, checkpoint=str(ck), threads=2) == ref
    with pytest.raises(ValueError):
        search_orthogonal(5, chunk=8, checkpoint=str(ck))


def test_search_guards():
    with pytest.raises(ValueError):
        search_orthogonal(6)
    with pytest.raises(ValueError):
        search_orthogonal(7, allow_long=True)
    with pytest.raises(ValueError):
        search_orthogonal(3, threads=0)


def test_search_progress_callback():
    seen = []
    search_orthogonal(4, chunk=1, progress=lambda a, b: seen.append((a, b)))
    assert seen[-1] == (6, 6)


def test_hit_json_and_certificate():
    hit = search_orthogonal(3)[0]
    assert SearchHit.from_json(json.loads(json.dumps(hit.to_json()))) == hit
    line = hit.format_line()
    assert line.startswith(f"{hit.pair.codes()[0]} ") and "cert=" in line
    f, g = W(90), W(150)
    c = certificate(f, g)
    assert len(c) == 16 and c != certificate(g, f)
    sq = (cayley_table(f) * 4 + cayley_table(g)).astype("<u2")
    assert c == hashlib.sha256(sq.ravel().tobytes()).hexdigest()[:16]
    assert np.unique(sq).size == 16
