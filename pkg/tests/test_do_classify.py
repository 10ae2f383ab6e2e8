import csv
import io
import json

import pytest

from dodickson.dickson import closed_form_coefficients
from dodickson.do_classify import (
    appendix_json,
    appendix_table,
    classify_sweep,
    form_witness,
    is_do,
    is_p_power_sum,
    sweep_to_csv,
    sweep_to_json,
    theorem_predicate,
    theorem_rule,
    verify_appendix,
)
from dodickson.errors import NotPrime, UnsupportedCharacteristic


def power_sums(p, bound):
    out, pi = set(), 1
    while pi < bound:
        pj = pi
        while pi + pj <= bound:
            out.add(pi + pj)
            pj *= p
        pi *= p
    return out


def oracle_is_do(k, m, d, p):
    """Closed-form coefficients + a precomputed set of p^i + p^j values."""
    sums = power_sums(p, k * d)
    coeffs = closed_form_coefficients(k, m)
    return all((k - 2 * i) * d in sums for i in range((k - 1) // 2 + 1) if coeffs[i] % p)


def test_is_p_power_sum_examples():
    assert is_p_power_sum(10, 3) == (0, 2)
    for p in (3, 5, 7, 11):
        assert is_p_power_sum(2, p) == (0, 0)
    assert is_p_power_sum(8, 3) is None
    assert is_p_power_sum(1, 3) is None


@pytest.mark.parametrize("p", [3, 5, 7])
def test_is_p_power_sum_exhaustive(p):
    sums = power_sums(p, 3000)
    for n in range(1, 3001):
        w = is_p_power_sum(n, p)
        assert (w is not None) == (n in sums)
        if w:
            i, j = w
            assert i <= j and p**i + p**j == n


def test_is_do_examples():
    v = is_do(5, 2, 2, 3)
    assert v.is_do
    assert {n for n, _ in v.surviving_terms} == {10, 2}
    assert v.decompositions == {10: (0, 2), 2: (0, 0)}
    v = is_do(9, 2, 4, 3)
    assert v.is_do and sorted(n for n, _ in v.surviving_terms) == [4, 12, 28, 36]
    assert v.decompositions == {36: (2, 3), 28: (0, 3), 12: (1, 2), 4: (0, 1)}
    assert not any(is_do(7, 2, d, 3).is_do for d in range(1, 201))
    v = is_do(3, 5, 1, 7)
    assert not v.is_do and v.offending_term == 3


def test_is_do_offending_is_leading_bad_term():
    v = is_do(10, 4, 1, 7)
    bad = [n for n, _ in v.surviving_terms if is_p_power_sum(n, 7) is None]
    assert len(bad) > 1 and v.offending_term == max(bad)


def test_theorem_predicate_examples():
    assert theorem_predicate(1, 2, 4, 3)
    assert not theorem_predicate(3, 3, 2, 7)
    assert theorem_predicate(5, 3, 2, 5)
    with pytest.raises(UnsupportedCharacteristic):
        theorem_predicate(1, 1, 2, 2)
    with pytest.raises(UnsupportedCharacteristic):
        is_do(1, 1, 2, 2)
    with pytest.raises(NotPrime):
        is_do(1, 1, 2, 9)
    assert theorem_rule(12, 2, 3, 3) == "k=12, d=p^n"


def test_form_witness_examples():
    w = form_witness(2, 3, 1)
    assert (w.n, w.alpha) == (0, 0)
    w = form_witness(5, 3, 2)
    assert (w.n, w.alpha) == (0, 2)
    assert form_witness(7, 5, 4) is None
    for d in range(1, 300):
        for c in (1, 2, 3, 4):
            w = form_witness(d, 3, c)
            if w:
                assert 3**w.n * (3**w.alpha + 1) == c * d


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_is_do_matches_oracle(p):
    for k in range(1, 31):
        for m in range(p):
            for d in range(1, 61):
                assert is_do(k, m, d, p).is_do == oracle_is_do(k, m, d, p), (k, m, d, p)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_classification_all_m(p):
    rows = classify_sweep(p, 40, None, 200)
    assert len(rows) == 40 * p * 200
    bad = [(r.k, r.m, r.d) for r in rows if r.mismatch]
    assert not bad


def test_sweep_examples():
    assert not [r for r in classify_sweep(3, 20, [2], 50) if r.mismatch]
    assert not [r for r in classify_sweep(5, 20, [3, 4], 50) if r.mismatch]
    rows = classify_sweep(7, 20, [5, 6], 50)
    assert {r.k for r in rows if r.verdict.is_do} == {1, 2}


def test_sweep_ordering_and_workers():
    rows = classify_sweep(5, 6, [2, 3], 10)
    keys = [(r.k, r.m, r.d) for r in rows]
    assert keys == sorted(keys)
    par = classify_sweep(5, 6, [2, 3], 10, workers=2)
    assert [(r.k, r.m, r.d, r.verdict.is_do) for r in par] == [(r.k, r.m, r.d, r.verdict.is_do) for r in rows]


def test_p_stability_and_frobenius_lift():
    for p in (3, 5, 7):
        for k in range(1, 21):
            for m in range(p):
                for d in range(1, 41):
                    v = is_do(k, m, d, p).is_do
                    assert v == is_do(k, m + p, d, p).is_do
                    assert v == is_do(k, m, d * p, p).is_do


def test_csv_and_json_outputs():
    rows = classify_sweep(3, 3, [2], 4)
    text = sweep_to_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert list(parsed[0]) == ["k", "m", "d", "p", "is_do", "predicted", "witnesses"]
    assert len(parsed) == len(rows)
    row = next(r for r in parsed if (r["k"], r["d"]) == ("1", "2"))
    assert row["is_do"] == "1" and row["witnesses"] == "2=3^0+3^0"
    js = sweep_to_json(rows, only_do=True)
    assert all(r["is_do"] or r["predicted"] for r in js)
    json.dumps(js)


def test_appendix_examples():
    fam = [f for f in appendix_table(3) if f.m_residue == 2 and f.k_base == 12]
    assert len(fam) == 1
    assert fam[0].render(3) == "X^(4*3^(n+1)) + 2aX^(10*3^n) + a^3X^(2*3^(n+1)) + 2a^4X^(4*3^n)"
    fam = [f for f in appendix_table(5) if f.m_residue == 3 and f.k_base == 5]
    assert fam[0].render(5) == "X^(2*5^(n+1)) + 3aX^(6*5^n) + 4a^2X^(2*5^n)"
    single = appendix_table(11)
    assert len(single) == 1 and single[0].render(11) == "X^(11^n*(11^alpha+1))"
    js = json.loads(appendix_json(5))
    assert {tuple(sorted(f)) for f in js} >= {("coefficients", "exponents", "k_pattern", "m_residue", "p",
                                                "parameters", "polynomial")}
    assert len(appendix_table(3)) == 22 and len(appendix_table(5)) == 21


@pytest.mark.parametrize("p", [3, 5, 7, 13])
def test_appendix_instances(p):
    for chk in verify_appendix(p, 2):
        assert chk.ok, chk.failures[:1]


def test_appendix_covers_sweep():
    """Every DO case in the sweep is an instance of some listed family."""
    for p in (3, 5):
        listed = set()
        for fam in appendix_table(p):
            for n in range(6):
                for alpha in range(6 if fam.uses_alpha else 1):
                    for ell in range(4 if fam.k_uses_ell else 1):
                        inst = fam.instance(p, n, alpha, ell)
                        if inst:
                            listed.add((inst[0], fam.m_residue, inst[1]))
        for r in classify_sweep(p, 30, None, 100):
            if r.verdict.is_do:
                assert (r.k, r.m, r.d) in listed, (r.k, r.m, r.d)
