import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dodickson.errors import FieldMismatch, PolynomialSyntaxError, UnboundParameter
from dodickson.finite_field import enumerate_field, make_field
from dodickson.polynomial import (
    BivariatePoly,
    SparsePoly,
    delta_bivariate,
    format_poly,
    parse,
    parse_bivariate,
    parse_family,
    reduce_mod_field,
)

F3 = make_field(3)
F5 = make_field(5)
F9 = make_field(3, 2)
F27 = make_field(3, 3)
F81 = make_field(3, 4, "x^4+2x^3+2", primitive=True)


def test_eval_examples():
    assert parse("x^2", F3)(2) == 1
    assert parse("x^4 + x^2", F3)(1) == 2
    assert SparsePoly(F9)(F9.from_code(5)) == 0
    # 0^0 = 1 picks up constants only
    assert parse("x^0 + x", F5)(0) == 1
    assert parse("3", F5)(0) == 3


def test_eval_field_mismatch():
    with pytest.raises(FieldMismatch):
        parse("x", F3)(F9.from_code(4))


def test_arith_examples():
    a = F9.from_code(4)
    f = parse("x^3 - a*x", F9, a=a)
    assert f.compose_monomial(2) == parse("x^6 - a*x^2", F9, a=a)
    assert f.compose_monomial(1) == f
    assert parse("x+1", F3) * parse("x-1", F3) == parse("x^2+2", F3)
    assert parse("x^2", F3) - parse("x^2", F3) == SparsePoly(F3)
    assert (parse("x", F3) * 2).terms == {1: F3(2)}
    with pytest.raises(FieldMismatch):
        parse("x", F3) + parse("x", F9)


def test_degree():
    assert parse("x^5 + 1", F3).degree == 5
    assert SparsePoly(F3).degree == -math.inf


def test_reduce_mod_field_examples():
    fam = parse_family("x^4 + a*x^2", F3)
    assert reduce_mod_field(fam.at(1)) == parse("2*x^2", F3)  # (1+a)X^2
    assert reduce_mod_field(fam.at(2)).is_zero()
    assert reduce_mod_field(parse("x^9", F9)) == parse("x", F9)
    # X^(q-1) stays put: it is not the constant 1
    assert reduce_mod_field(parse("x^8", F9)) == parse("x^8", F9)


@pytest.mark.parametrize("F", [F3, F5, F9, F27])
def test_reduce_mod_field_preserves_function(F):
    rng = np.random.default_rng(1)
    for _ in range(20):
        terms = {int(n): F.from_code(int(c)) for n, c in zip(rng.integers(0, 5 * F.q, 4), rng.integers(1, F.q, 4))}
        f = SparsePoly(F, terms)
        r = reduce_mod_field(f)
        assert r.degree < F.q
        assert np.array_equal(f.eval_all(), r.eval_all())
        for x in enumerate_field(F):
            assert f(x) == r(x)


def test_delta_bivariate_examples():
    assert delta_bivariate(parse("x^2", F5)).terms == {(1, 1): F5(2)}
    a = F9.from_code(5)
    d = delta_bivariate(parse("x^4 + a*x^2", F9, a=a))
    # XY (X^2 + Y^2 - a)
    assert d == BivariatePoly(F9, {(3, 1): 1, (1, 3): 1, (1, 1): -a})
    assert d.terms[(1, 1)] == 2 * a
    assert delta_bivariate(parse("x^3", F27)).is_zero()


@pytest.mark.parametrize("F", [F5, F9, F27, F81])
def test_delta_bivariate_matches_direct_difference(F):
    a = F.from_code(F.q - 2)
    f = parse("x^10 + 2*a*x^6 + a^2*x^2 + x^4 + 1", F, a=a)
    d = delta_bivariate(f)
    tab = F.tables
    fx = f.eval_all()
    grid = d.eval_grid(tab.codes, tab.codes)
    xs, ys = np.meshgrid(tab.codes, tab.codes, indexing="ij")
    direct = tab.combine([fx[tab.add(xs, ys)], fx[xs], fx[ys]], signs=[1, -1, -1])
    assert np.array_equal(grid, direct)
    # scalar spot check
    x, y = F.from_code(1), F.from_code(F.q - 1)
    assert d(x, y) == f(x + y) - f(x) - f(y)


@pytest.mark.parametrize("F", [F9, F27])
def test_delta_of_do_is_additive(F):
    a = F.generator
    f = parse("x^12 + 2*a*x^10 + a^3*x^6 + 2*a^4*x^4", F, a=a)
    elems = list(enumerate_field(F))
    for eps in elems[1:4]:
        def delta(x):
            return f(x + eps) - f(x) - f(eps)
        for x1, x2 in itertools.product(elems[:9], repeat=2):
            assert delta(x1 + x2) == delta(x1) + delta(x2)


def test_compose_monomial_evaluates_at_power():
    f = parse("x^3 + 2*x + 1", F27)
    g = f.compose_monomial(4)
    for x in enumerate_field(F27):
        assert g(x) == f(x**4)


def test_eval_all_matches_scalar():
    f = parse("(1,2)*x^7 + x^3 + 2", F9)
    vals = f.eval_all()
    for x in enumerate_field(F9):
        assert F9.from_code(int(vals[x.code])) == f(x)


def test_parse_examples():
    f = parse("x^10 + 2*a*x^6 + a^2*x^2", F5, a=1)
    assert {n: int(str(c)) for n, c in f.terms.items()} == {10: 1, 6: 2, 2: 1}
    assert parse("0", F5).is_zero()
    assert format_poly(parse("x^2", F5)) == "x^2"


def test_parse_errors():
    with pytest.raises(UnboundParameter):
        parse("x + a", F5)
    for bad in ("", "x^", "x ++ 1", "2**x", "(1,2", "x^a", "z"):
        with pytest.raises(PolynomialSyntaxError):
            parse(bad, F5)
    with pytest.raises(PolynomialSyntaxError):
        parse("x*y", F5)


def test_parse_variants():
    assert parse("X^2 - x^2", F5).is_zero()
    assert parse("2x^3", F5) == parse("2*x^3", F5)
    assert parse("-x", F5) == parse("4*x", F5)
    assert parse("(0,1)*x", F9).terms[1] == F9.y
    b = parse_bivariate("x^2+y^2-(1)", F9)
    assert b.total_degree == 2


def test_family_at():
    fam = parse_family("x^6 + 4*a*x^2", F5)
    assert fam.exponents() == [2, 6]
    assert fam.at(1) == parse("x^6 + 4*x^2", F5)
    assert fam.at(0) == parse("x^6", F5)


poly_st = st.dictionaries(st.integers(0, 40), st.integers(1, 8), max_size=5)


@settings(max_examples=80, deadline=None)
@given(poly_st, st.sampled_from([F3, F5, F9, F27]))
def test_format_parse_roundtrip(raw, F):
    f = SparsePoly(F, {n: F.from_code(c % F.q) for n, c in raw.items()})
    assert parse(format_poly(f), F) == f


@settings(max_examples=40, deadline=None)
@given(poly_st, poly_st)
def test_ring_laws(r1, r2):
    F = F9
    f = SparsePoly(F, {n: F.from_code(c) for n, c in r1.items()})
    g = SparsePoly(F, {n: F.from_code(c) for n, c in r2.items()})
    assert f + g == g + f
    assert f * g == g * f
    x = F.from_code(7)
    assert (f * g)(x) == f(x) * g(x)
    assert (f - g)(x) == f(x) - g(x)
