"""Dickson polynomials of the (m+1)-th kind.

``D_{k,m}(X, a) = sum_i c_i (a^i) X^{k-2i}`` with integer coefficients
``c_i = (k - m i)/(k - i) * C(k-i, i) * (-1)^i``.  They are built here from the
first- and second-kind recurrences (``f_k = X f_{k-1} - a f_{k-2}``) combined as
``m E_k - (m - 1) D_k``, entirely over the integers; reduction mod p happens only
when a polynomial is instantiated over a field.

``frak_d`` gives the composed, constant-free polynomial
``D_{k,m}(X^d, a) - D_{k,m}(0, a)`` whose DO behaviour the rest of the package
studies.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import InvalidK
from .finite_field import FieldElement, FieldSpec
from .polynomial import SparsePoly

__all__ = [
    "DicksonSpec",
    "SymbolicDicksonPoly",
    "first_kind",
    "second_kind",
    "dickson_symbolic",
    "closed_form_coefficients",
    "frak_d",
    "instantiate",
    "parse_dickson_spec",
    "format_symbolic",
]


@lru_cache(maxsize=None)
def _recurrence(k: int, first: bool) -> tuple[int, ...]:
    # entry i is the integer coefficient of a^i X^{k-2i}
    if k == 0:
        return (2,) if first else (1,)
    if k == 1:
        return (1,)
    prev, prev2 = _recurrence(k - 1, first), _recurrence(k - 2, first)
    out = []
    for i in range(k // 2 + 1):
        c = prev[i] if i < len(prev) else 0
        if 1 <= i <= len(prev2):
            c -= prev2[i - 1]
        out.append(c)
    return tuple(out)


def first_kind(k: int) -> tuple[int, ...]:
    """Integer coefficients of D_k(X, a), indexed by the power of ``a``."""
    return _recurrence(k, True)


def second_kind(k: int) -> tuple[int, ...]:
    """Integer coefficients of E_k(X, a), indexed by the power of ``a``."""
    return _recurrence(k, False)


def closed_form_coefficients(k: int, m: int) -> tuple[int, ...]:
    """Coefficients straight from the (k - m i)/(k - i) binomial formula (k >= 1)."""
    if k < 1:
        raise InvalidK("closed form needs k >= 1")
    out = []
    for i in range(k // 2 + 1):
        c = Fraction(k - m * i, k - i) * comb(k - i, i) * (-1) ** i
        if c.denominator != 1:
            raise ArithmeticError(f"non-integral coefficient at k={k}, m={m}, i={i}")
        out.append(int(c))
    return tuple(out)


@dataclass(frozen=True)
class SymbolicDicksonPoly:
    """Integer-coefficient polynomial in X with a formal parameter ``a``.

    ``terms`` holds ``(i, c_i, exponent)`` meaning ``c_i * a^i * X^exponent``.
    Zero coefficients are kept so term positions stay aligned with ``i``.
    """

    k: int
    m: int
    terms: tuple[tuple[int, int, int], ...]
    d: int = 1

    def coefficients(self) -> list[int]:
        return [c for _, c, _ in self.terms]

    def nonzero_terms(self, p: int | None = None) -> list[tuple[int, int, int]]:
        """Terms whose coefficient is nonzero (mod ``p`` when given)."""
        if p is None:
            return [t for t in self.terms if t[1]]
        return [(i, c % p, n) for i, c, n in self.terms if c % p]

    def has_constant_term(self) -> bool:
        return any(n == 0 and c for _, c, n in self.terms)

    def __str__(self):
        return format_symbolic(self)


@dataclass(frozen=True)
class DicksonSpec:
    k: int
    m: int
    d: int = 1
    p: int | None = None
    a: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.k < 0 or self.m < 0:
            raise ValueError("k and m must be non-negative")
        if self.d < 1:
            raise ValueError("d must be >= 1")

    def normalized(self) -> DicksonSpec:
        """Same spec with ``m`` reduced mod the characteristic, if one is fixed."""
        if self.p is None:
            return self
        return DicksonSpec(self.k, self.m % self.p, self.d, self.p, self.a)


def dickson_symbolic(k: int, m: int) -> SymbolicDicksonPoly:
    """D_{k,m}(X, a) as ``m E_k - (m - 1) D_k``, including the constant for even k."""
    if k < 0 or m < 0:
        raise ValueError("k and m must be non-negative")
    dk, ek = first_kind(k), second_kind(k)
    terms = tuple((i, m * ek[i] - (m - 1) * dk[i], k - 2 * i) for i in range(len(dk)))
    return SymbolicDicksonPoly(k, m, terms)


def frak_d(spec: DicksonSpec | None = None, *, k: int | None = None, m: int | None = None, d: int = 1) -> SymbolicDicksonPoly:
    """D_{k,m}(X^d, a) - D_{k,m}(0, a): terms i <= (k-1)//2 with exponents (k-2i)d."""
    if spec is not None:
        k, m, d = spec.k, spec.m, spec.d
    if k is None or m is None:
        raise TypeError("need a DicksonSpec or k and m")
    if k < 1:
        raise InvalidK("frak_d needs k >= 1")
    full = dickson_symbolic(k, m)
    terms = tuple((i, c, n * d) for i, c, n in full.terms if i <= (k - 1) // 2)
    return SymbolicDicksonPoly(k, m, terms, d)


def instantiate(sym: SymbolicDicksonPoly, field_: FieldSpec, a, d: int = 1) -> SparsePoly:
    """Concrete polynomial over ``field_``: c_i mod p times a^i at X^{exponent * d}."""
    a = field_.element(a)
    terms: dict[int, FieldElement] = {}
    for i, c, n in sym.terms:
        coeff = field_.element(c) * (a**i)
        if coeff:
            key = n * d
            terms[key] = terms[key] + coeff if key in terms else coeff
    return SparsePoly(field_, terms)


def format_symbolic(sym: SymbolicDicksonPoly, p: int | None = None) -> str:
    """Text such as ``x^10 - 6*a*x^8 + 7*a^2*x^6``; coefficients reduced mod ``p`` if given."""
    parts = []
    for i, c, n in sym.terms:
        if p is not None:
            c %= p
        if c == 0:
            continue
        mono = [s for s in ("" if i == 0 else ("a" if i == 1 else f"a^{i}"),
                            "" if n == 0 else ("x" if n == 1 else f"x^{n}")) if s]
        mag = abs(c)
        body = "*".join(([str(mag)] if mag != 1 or not mono else []) + mono)
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_SPEC_RE = re.compile(r"\s*([kmdpa])\s*=\s*(\([^)]*\)|[^,]+?)\s*(?:,|$)")


def parse_dickson_spec(text: str) -> dict:
    """Parse ``"k=5,m=2,d=2,p=3,a=g^7"`` into a dict of raw string/int values.

    ``a`` stays a string (``"g^7"``, ``"(1,2)"`` or an integer literal) because it
    can only be resolved once a field is known.
    """
    out: dict = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _SPEC_RE.match(text, pos)
        if not m:
            raise ValueError(f"bad Dickson spec near {text[pos:]!r}")
        key, val = m.group(1), m.group(2).strip()
        out[key] = val if key == "a" else int(val)
        pos = m.end()
    if "k" not in out or "m" not in out:
        raise ValueError("Dickson spec needs k and m")
    return out
