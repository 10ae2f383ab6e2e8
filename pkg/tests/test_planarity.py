import itertools
import random

import pytest

from dodickson.errors import NotDOShaped
from dodickson.finite_field import enumerate_field, is_kth_power, make_field
from dodickson.planarity import (
    check_witness,
    decomposition_check,
    delta_root_search,
    is_do_shaped,
    is_permutation,
    is_planar_definition,
    is_planar_do,
    is_two_to_one,
    monomial_law_sweep,
    nonplanarity_claims,
    planar_set_sweep,
    reproduce_planar_list,
    residue_pattern,
    sample_square_classes,
)
from dodickson.polynomial import SparsePoly, parse, parse_family

F3 = make_field(3)
F5 = make_field(5)
F9 = make_field(3, 2)
F25 = make_field(5, 2, "x^2+4x+2", primitive=True)
F81 = make_field(3, 4, "x^4+2x^3+2", primitive=True)


def slow_planar(f):
    """Oracle: scalar arithmetic straight from the definition."""
    F = f.field
    elems = list(enumerate_field(F))
    for eps in elems[1:]:
        seen = {f(x + eps) - f(x) - f(eps) for x in elems}
        if len(seen) != F.q:
            return False
    return True


def test_is_permutation_examples():
    for F in (F3, F9, F25):
        assert is_permutation(parse("x", F))
    assert not is_permutation(parse("x^2", F3))
    fam = parse_family("x^3 + 2*a*x", F9)
    for x in enumerate_field(F9):
        if x and not is_kth_power(x, 2):
            assert is_permutation(fam.at(x))


def test_definition_examples():
    for e in range(1, 5):
        assert is_planar_definition(SparsePoly.monomial(make_field(3, e), 2)).planar
    rep = is_planar_definition(parse("x^4", F9))
    assert not rep.planar and check_witness(rep)
    fam = parse_family("x^10 + a^2*x^2", F3)
    assert all(is_planar_definition(fam.at(a)).planar for a in (1, 2))


def test_two_to_one_examples():
    ok, hist = is_two_to_one(parse("x^2", F5))
    assert ok and hist == {0: 2, 1: 1, 2: 2}
    ok, hist = is_two_to_one(parse("x", F5))
    assert not ok and hist == {1: 5}
    # X^2 (X^4 + a)^2 with -a a fourth power has nonzero roots
    fam = parse_family("x^10 + 2*a*x^6 + a^2*x^2", F25)
    for c in range(1, 25):
        a = F25.from_code(c)
        if is_kth_power(-a, 4):
            f = fam.at(a)
            assert not is_two_to_one(f)[0]
            rep = is_planar_do(f)
            assert rep.witness["kind"] == "root" and check_witness(rep)


def test_planar_do_examples():
    g = F81.generator
    # a = g^2 planar, a = g not: holds for X^10 + a^2 X^2
    fam = parse_family("x^10 + a^2*x^2", F81)
    assert is_planar_do(fam.at(g**2)).planar
    assert not is_planar_do(fam.at(g)).planar
    # with the coefficient a itself the two verdicts swap (see test_item3_literal_reading)
    lit = parse_family("x^10 + a*x^2", F81)
    assert not is_planar_do(lit.at(g**2)).planar
    assert is_planar_do(lit.at(g)).planar
    assert is_planar_do(parse("x^6 + 4*a*x^2", F25, a=F25.generator**3)).planar
    with pytest.raises(NotDOShaped):
        is_planar_do(parse("x^3", F9))


def test_item3_literal_reading():
    """Planar set of X^10 + aX^2 over F_81 is not {g^(4n+2)}; the a^2 reading is."""
    fam = parse_family("x^10 + a*x^2", F81)
    res = planar_set_sweep(fam, F81, method="two-to-one")
    assert len(res.planar_codes) == 30
    assert res.residue_pattern() == (8, [1, 3, 4])
    res2 = planar_set_sweep(parse_family("x^10 + a^2*x^2", F81), F81)
    assert len(res2.planar_codes) == 20 and res2.residue_pattern() == (4, [2])
    assert set(res2.dlogs) == {4 * n + 2 for n in range(20)}


def test_sweep_examples():
    res = planar_set_sweep(parse_family("x^12 + 2*a*x^10 + a^3*x^6 + 2*a^4*x^4", F9), F9)
    assert [F9.from_code(c) for c in res.planar_codes] == [x for x in enumerate_field(F9) if x and not is_kth_power(x, 2)]
    res = planar_set_sweep(parse_family("x^10 + 2*a*x^6 + a^2*x^2", F25), F25)
    assert res.planar_codes == [c for c in range(1, 25) if not is_kth_power(-F25.from_code(c), 4)]
    res = planar_set_sweep(parse_family("x^6 + 4*a*x^2", F25), F25)
    assert set(res.dlogs) == {4 * n + 3 for n in range(6)}
    res = planar_set_sweep(parse_family("x^10 + 2*a*x^6 + a^2*x^2", F5), F5)
    assert [str(e) for e in res.elements] == ["1", "2", "3"]


def test_sweep_methods_agree_and_workers():
    fam = parse_family("x^10 + 2*a*x^6 + a^2*x^2", F25)
    a = planar_set_sweep(fam, F25, method="definition")
    b = planar_set_sweep(fam, F25, method="two-to-one")
    c = planar_set_sweep(fam, F25, method="auto", workers=2)
    assert a.planar_codes == b.planar_codes == c.planar_codes
    sub = planar_set_sweep(fam, F25, a_values=[1, 2, F25.generator])
    assert len(sub.tested) == 3 and sub.residue_pattern() is None
    # elements keep their identity; bare ints are prime-field values, not codes
    picked = planar_set_sweep(fam, F25, a_values=[F25.from_code(c) for c in (7, 13)])
    assert picked.tested == [7, 13]
    assert planar_set_sweep(fam, F25, a_values=[7]).tested == [F25.code(F25(2))]


def test_delta_root_search_examples():
    fam = parse_family("x^4 + a*x^2", F9)
    elems = list(enumerate_field(F9))
    squares = {x * x for x in elems if x}
    for a in elems[1:]:
        root = delta_root_search(fam.at(a))
        sum_of_two = any(u + v == a for u in squares for v in squares)
        assert (root is not None) == sum_of_two
        if root:
            x, y = root
            assert x and y and x * x + y * y == a
    assert delta_root_search(parse("x^2", F25)) is None


def test_delta_root_search_e7():
    F = make_field(3, 7)
    fam = parse_family("x^10 + a^2*x^2", F)
    rng = random.Random(3)
    for c in rng.sample(range(1, F.q), 4):
        f = fam.at(F.from_code(c))
        root = delta_root_search(f)
        x, y = root
        assert x and y and f(x + y) == f(x) + f(y)


def random_do_poly(F, rng, n_terms=3):
    p = F.p
    exps = sorted({p**i + p**j for i in range(F.e + 1) for j in range(i, F.e + 1)})
    chosen = rng.sample(exps, min(n_terms, len(exps)))
    return SparsePoly(F, {n: F.from_code(rng.randrange(1, F.q)) for n in chosen})


@pytest.mark.parametrize("pe", [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2), (3, 4), (3, 5)])
def test_definition_and_two_to_one_agree(pe):
    F = make_field(*pe)
    rng = random.Random(sum(pe))
    for _ in range(12):
        f = random_do_poly(F, rng, rng.randint(1, 3))
        d = is_planar_definition(f)
        t = is_planar_do(f)
        assert d.planar == t.planar == is_two_to_one(f)[0]
        if F.q <= 25:
            assert d.planar == slow_planar(f)
        for rep in (d, t):
            if not rep.planar:
                assert check_witness(rep)


def test_linearized_criterion():
    """For DO f, Delta_f(., eps) permutes iff its only root is 0."""
    F = make_field(3, 3)
    rng = random.Random(7)
    for _ in range(6):
        f = random_do_poly(F, rng, 2)
        fx = {x: f(x) for x in enumerate_field(F)}
        for eps in itertools.islice(enumerate_field(F), 1, 6):
            vals = [f(x + eps) - fx[x] - f(eps) for x in fx]
            roots = sum(1 for v in vals if not v)
            assert (len(set(vals)) == F.q) == (roots == 1)


@pytest.mark.parametrize("n", [1, 2])
def test_frobenius_composition_stability(n):
    cases = [
        (F81, "x^10 + a^2*x^2"),
        (F9, "x^12 + 2*a*x^10 + a^3*x^6 + 2*a^4*x^4"),
        (make_field(3, 3), "x^36 + 2*a*x^28 + 2*a^3*x^12 + a^4*x^4"),
        (F25, "x^6 + 4*a*x^2"),
        (F25, "x^10 + 2*a*x^6 + a^2*x^2"),
    ]
    for F, text in cases:
        fam = parse_family(text, F)
        for c in range(1, F.q, 3):
            f = fam.at(F.from_code(c))
            g = f.compose_monomial(F.p**n)
            assert is_do_shaped(g)
            assert is_planar_do(f).planar == is_planar_do(g).planar


def test_monomial_law():
    law = monomial_law_sweep(primes=(3, 5, 7), alpha_max=4, e_max=5)
    assert law["summary"]["e_rule"]["mismatches"] == 0
    assert law["summary"]["alpha_rule"]["mismatches"] > 0
    small = [r for r in law["rows"] if r["p"] ** r["e"] <= 125]
    for r in small[::5]:
        F = make_field(r["p"], r["e"])
        assert is_planar_definition(SparsePoly.monomial(F, r["p"] ** r["alpha"] + 1)).planar == r["planar"]


def test_decomposition_claim():
    assert decomposition_check(e_max=4, alpha_max=3) == []


def test_residue_pattern():
    assert residue_pattern([2, 6, 10], 12) == (4, [2])
    assert residue_pattern([1, 3, 5, 7], 8) == (2, [1])
    assert residue_pattern([1], 16) is None
    assert residue_pattern([1, 2], 16) is None
    assert residue_pattern([], 8) is None


def test_sample_square_classes():
    F = make_field(3, 5)
    sq, nsq = sample_square_classes(F, 20, seed=1)
    assert len(sq) == len(nsq) == 20 and len(set(sq)) == 20
    assert all(is_kth_power(x, 2) for x in sq)
    assert not any(is_kth_power(x, 2) for x in nsq)
    assert sample_square_classes(F, 20, seed=1) == (sq, nsq)


def test_reproduce_planar_list_small():
    items = reproduce_planar_list(max_e=3)
    by_item = {}
    for it in items:
        by_item.setdefault(it.item, []).append(it.ok)
    assert by_item["3"] == [False]
    assert all(all(v) for k, v in by_item.items() if k != "3")


def test_nonplanarity_claims_up_to_5():
    assert all(it.ok for it in nonplanarity_claims(max_e=5))
