"""Sparse polynomials over a :class:`~dodickson.finite_field.FieldSpec`.

Three containers live here:

* :class:`SparsePoly` -- univariate, exponent -> nonzero coefficient.
* :class:`BivariatePoly` -- exponent pair -> nonzero coefficient.
* :class:`PolyFamily` -- univariate polynomial whose coefficients carry a power
  of a free parameter ``a``; ``family.at(a)`` gives a concrete :class:`SparsePoly`.

The text grammar accepted by :func:`parse` and friends::

    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (['*'] factor)*
    factor := INT | '(' INT (',' INT)* ')' | 'a' ['^' INT] | 'x' ['^' INT] | 'y' ['^' INT]

Whitespace is ignored and ``x``, ``y``, ``a`` are case-insensitive.  A tuple is an
element in coordinates ``(c0, c1, ...)``; missing trailing coordinates are zero.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict

import numpy as np

from .errors import FieldMismatch, PolynomialSyntaxError, UnboundParameter
from .finite_field import FieldElement, FieldSpec

__all__ = [
    "SparsePoly",
    "BivariatePoly",
    "PolyFamily",
    "parse",
    "parse_family",
    "parse_bivariate",
    "format_poly",
    "reduce_mod_field",
    "delta_bivariate",
    "compose_monomial",
]


def _coerce_terms(field: FieldSpec, terms) -> dict:
    out = {}
    for key, c in dict(terms).items():
        c = field.element(c)
        if c:
            out[key] = c
    return out


class SparsePoly:
    """Univariate polynomial over ``field`` with no stored zero coefficients."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms=None):
        self.field = field
        self.terms: dict[int, FieldElement] = _coerce_terms(field, terms or {})
        if any(n < 0 for n in self.terms):
            raise ValueError("exponents must be non-negative")

    @classmethod
    def monomial(cls, field: FieldSpec, n: int, coeff=1) -> SparsePoly:
        return cls(field, {n: coeff})

    @classmethod
    def x(cls, field: FieldSpec) -> SparsePoly:
        return cls(field, {1: 1})

    @property
    def degree(self) -> float | int:
        """Largest exponent; ``-inf`` for the zero polynomial."""
        return max(self.terms) if self.terms else -math.inf

    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self) -> list[int]:
        return sorted(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def __repr__(self):
        return f"SparsePoly({format_poly(self)!r} over {self.field.description})"

    def __str__(self):
        return format_poly(self)

    def _check(self, other: SparsePoly):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: SparsePoly) -> SparsePoly:
        self._check(other)
        terms = dict(self.terms)
        for n, c in other.terms.items():
            terms[n] = terms[n] + c if n in terms else c
        return SparsePoly(self.field, terms)

    def __neg__(self) -> SparsePoly:
        return SparsePoly(self.field, {n: -c for n, c in self.terms.items()})

    def __sub__(self, other: SparsePoly) -> SparsePoly:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (FieldElement, int)):
            return self.scale(other)
        self._check(other)
        terms: dict[int, FieldElement] = {}
        for n1, c1 in self.terms.items():
            for n2, c2 in other.terms.items():
                n = n1 + n2
                terms[n] = terms[n] + c1 * c2 if n in terms else c1 * c2
        return SparsePoly(self.field, terms)

    __rmul__ = __mul__

    def scale(self, c) -> SparsePoly:
        c = self.field.element(c)
        return SparsePoly(self.field, {n: c * v for n, v in self.terms.items()})

    def compose_monomial(self, d: int) -> SparsePoly:
        """f(X) -> f(X^d)."""
        if d < 1:
            raise ValueError("d must be a positive integer")
        return SparsePoly(self.field, {n * d: c for n, c in self.terms.items()})

    def __call__(self, x) -> FieldElement:
        return self.eval(x)

    def eval(self, x) -> FieldElement:
        """Evaluate with the convention 0^0 = 1."""
        x = self.field.element(x)
        acc = self.field.zero
        for n, c in self.terms.items():
            acc = acc + c * (x**n)
        return acc

    def eval_all(self, x=None) -> np.ndarray:
        """Integer codes of f(x) for every x (enumeration order) or for codes ``x``."""
        tab = self.field.tables
        if not self.terms:
            shape = tab.codes.shape if x is None else np.shape(x)
            return np.zeros(shape, dtype=np.int64)
        parts = [tab.scaled_power(int(tab.log[c.code]), n, x) for n, c in self.terms.items()]
        return tab.combine(parts)

    def reduce_mod_field(self) -> SparsePoly:
        return reduce_mod_field(self)


def compose_monomial(f: SparsePoly, d: int) -> SparsePoly:
    return f.compose_monomial(d)


def _reduced_exponent(n: int, q: int) -> int:
    # X^q == X as functions; nonzero exponents land in [1, q-1], never at 0
    if n < q:
        return n
    return (n - 1) % (q - 1) + 1


def reduce_mod_field(f: SparsePoly) -> SparsePoly:
    """The representative of degree < q inducing the same function on F_q."""
    q = f.field.q
    terms: dict[int, FieldElement] = {}
    for n, c in f.terms.items():
        r = _reduced_exponent(n, q)
        terms[r] = terms[r] + c if r in terms else c
    return SparsePoly(f.field, terms)


class BivariatePoly:
    """Polynomial in X, Y over ``field``; keys are ``(i, j)`` for X^i Y^j."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms=None):
        self.field = field
        self.terms: dict[tuple[int, int], FieldElement] = _coerce_terms(field, terms or {})

    @property
    def total_degree(self) -> float | int:
        return max(i + j for i, j in self.terms) if self.terms else -math.inf

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __repr__(self):
        return f"BivariatePoly({format_poly(self)!r} over {self.field.description})"

    def __str__(self):
        return format_poly(self)

    def __call__(self, x, y) -> FieldElement:
        return self.eval(x, y)

    def eval(self, x, y) -> FieldElement:
        x, y = self.field.element(x), self.field.element(y)
        acc = self.field.zero
        for (i, j), c in self.terms.items():
            acc = acc + c * (x**i) * (y**j)
        return acc

    def eval_grid(self, xs, ys) -> np.ndarray:
        """Codes of h(x, y) on the grid ``xs`` x ``ys`` (code arrays); shape (len xs, len ys)."""
        tab = self.field.tables
        xs = np.asarray(xs, dtype=np.int64)[:, None]
        ys = np.asarray(ys, dtype=np.int64)[None, :]
        shape = (xs.shape[0], ys.shape[1])
        if not self.terms:
            return np.zeros(shape, dtype=np.int64)
        lx, ly = tab.log[xs], tab.log[ys]
        p = self.field.p
        acc = np.zeros(shape + (self.field.e,), dtype=np.int64)
        for (i, j), c in self.terms.items():
            logc = int(tab.log[c.code])
            code = tab.exp[(logc + i * lx + j * ly) % tab.order]
            mask = np.zeros(shape, dtype=bool)
            if i:
                mask = mask | (xs == 0)
            if j:
                mask = mask | (ys == 0)
            code = np.where(mask, 0, code)
            acc += tab.digits[code]
        return (acc % p) @ tab.weights


def delta_bivariate(f: SparsePoly) -> BivariatePoly:
    """Expand f(X+Y) - f(X) - f(Y)."""
    field = f.field
    p = field.p
    terms: dict[tuple[int, int], FieldElement] = defaultdict(lambda: field.zero)
    for n, c in f.terms.items():
        if n == 0:
            terms[(0, 0)] = terms[(0, 0)] - c
            continue
        for j in range(1, n):
            b = math.comb(n, j) % p
            if b:
                terms[(j, n - j)] = terms[(j, n - j)] + c * b
    return BivariatePoly(field, terms)


class PolyFamily:
    """Polynomial whose terms are ``coeff * a^k * X^n`` for a free parameter ``a``."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms=None):
        self.field = field
        # (exponent, a_power) -> coefficient
        self.terms: dict[tuple[int, int], FieldElement] = _coerce_terms(field, terms or {})

    def exponents(self) -> list[int]:
        return sorted({n for n, _ in self.terms})

    def at(self, a) -> SparsePoly:
        a = self.field.element(a)
        out: dict[int, FieldElement] = {}
        for (n, k), c in self.terms.items():
            v = c * (a**k)
            out[n] = out[n] + v if n in out else v
        return SparsePoly(self.field, out)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"PolyFamily({format_poly(self)!r} over {self.field.description})"


# -- parsing ------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([xya])|(\^)|(\*)|([+-])|(\())")


def _parse_raw(text: str, field: FieldSpec) -> dict[tuple[int, int, int], FieldElement]:
    """Parse into (x_exp, y_exp, a_pow) -> coefficient."""
    s = text.strip().lower()
    if not s:
        raise PolynomialSyntaxError("empty polynomial")
    pos = 0
    out: dict[tuple[int, int, int], FieldElement] = {}

    def error(msg):
        raise PolynomialSyntaxError(f"{msg} at position {pos} in {text!r}")

    def skip_ws():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def read_int():
        nonlocal pos
        skip_ws()
        m = re.match(r"\d+", s[pos:])
        if not m:
            error("expected integer")
        pos += m.end()
        return int(m.group())

    def read_factor():
        nonlocal pos
        skip_ws()
        if pos >= len(s):
            error("unexpected end")
        ch = s[pos]
        if ch.isdigit():
            return ("c", field.element(read_int()))
        if ch == "(":
            pos += 1
            coords = [read_int()]
            skip_ws()
            while pos < len(s) and s[pos] == ",":
                pos += 1
                coords.append(read_int())
                skip_ws()
            if pos >= len(s) or s[pos] != ")":
                error("expected ')'")
            pos += 1
            try:
                return ("c", field.element(coords))
            except ValueError as exc:
                raise PolynomialSyntaxError(str(exc)) from None
        if ch in "xya":
            pos += 1
            skip_ws()
            n = 1
            if pos < len(s) and s[pos] == "^":
                pos += 1
                n = read_int()
            return (ch, n)
        error(f"unexpected character {ch!r}")

    skip_ws()
    sign = 1
    if pos < len(s) and s[pos] in "+-":
        sign = -1 if s[pos] == "-" else 1
        pos += 1
    while True:
        coeff = field.element(sign)
        ex = {"x": 0, "y": 0, "a": 0}
        while True:
            kind, val = read_factor()
            if kind == "c":
                coeff = coeff * val
            else:
                ex[kind] += val
            skip_ws()
            if pos < len(s) and s[pos] == "*":
                pos += 1
                continue
            if pos < len(s) and (s[pos].isdigit() or s[pos] in "xya("):
                continue
            break
        key = (ex["x"], ex["y"], ex["a"])
        out[key] = out[key] + coeff if key in out else coeff
        skip_ws()
        if pos >= len(s):
            break
        if s[pos] not in "+-":
            error(f"unexpected character {s[pos]!r}")
        sign = -1 if s[pos] == "-" else 1
        pos += 1
    return out


def parse(text: str, field: FieldSpec, a=None) -> SparsePoly:
    """Parse a univariate polynomial in ``x``, substituting ``a`` if it occurs."""
    raw = _parse_raw(text, field)
    if any(y for _, y, _ in raw):
        raise PolynomialSyntaxError(f"unexpected variable y in {text!r}")
    if any(k for _, _, k in raw):
        if a is None:
            raise UnboundParameter(f"{text!r} mentions a but no value was given")
        return parse_family(text, field).at(a)
    out: dict[int, FieldElement] = {}
    for (n, _, _), c in raw.items():
        out[n] = out[n] + c if n in out else c
    return SparsePoly(field, out)


def parse_family(text: str, field: FieldSpec) -> PolyFamily:
    raw = _parse_raw(text, field)
    if any(y for _, y, _ in raw):
        raise PolynomialSyntaxError(f"unexpected variable y in {text!r}")
    return PolyFamily(field, {(n, k): c for (n, _, k), c in raw.items()})


def parse_bivariate(text: str, field: FieldSpec, a=None) -> BivariatePoly:
    raw = _parse_raw(text, field)
    if any(k for _, _, k in raw) and a is None:
        raise UnboundParameter(f"{text!r} mentions a but no value was given")
    out: dict[tuple[int, int], FieldElement] = {}
    for (i, j, k), c in raw.items():
        v = c * (field.element(a) ** k) if k else c
        out[(i, j)] = out[(i, j)] + v if (i, j) in out else v
    return BivariatePoly(field, out)


# -- formatting -----------------------------------------------------------------


def _coeff_str(c: FieldElement) -> str:
    return str(c.coeffs[0]) if c.is_prime_subfield() else c.to_string()


def _var(name: str, n: int) -> str:
    if n == 0:
        return ""
    return name if n == 1 else f"{name}^{n}"


def _term_str(c: FieldElement, monos: list[str]) -> str:
    monos = [m for m in monos if m]
    cs = _coeff_str(c)
    if not monos:
        return cs
    if cs == "1":
        return "*".join(monos)
    return "*".join([cs] + monos)


def format_poly(f) -> str:
    """Canonical text form; ``parse(format_poly(f), field) == f``."""
    if isinstance(f, SparsePoly):
        items = [(_term_str(c, [_var("x", n)]), (n,)) for n, c in f.terms.items()]
    elif isinstance(f, BivariatePoly):
        items = [(_term_str(c, [_var("x", i), _var("y", j)]), (i + j, i)) for (i, j), c in f.terms.items()]
    elif isinstance(f, PolyFamily):
        items = [(_term_str(c, [_var("a", k), _var("x", n)]), (n, -k)) for (n, k), c in f.terms.items()]
    else:
        raise TypeError(f"cannot format {type(f).__name__}")
    if not items:
        return "0"
    items.sort(key=lambda t: t[1], reverse=True)
    return " + ".join(s for s, _ in items)
