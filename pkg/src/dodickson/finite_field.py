"""Arithmetic in F_p and F_{p^e} for odd primes p.

Elements of F_{p^e} are coordinate vectors ``(c0, ..., c_{e-1})`` with respect to
the basis ``1, Y, ..., Y^{e-1}`` of ``F_p[Y]/(modulus)``.  The ordering used for
enumeration, default-modulus search and generator search compares coordinates
low-degree-first, i.e. ``c0`` is the most significant position.

Bulk work (sweeps over every element of a field) goes through :class:`FieldTables`,
which holds exponential/logarithm tables as numpy arrays keyed by an integer code
of each element.  Single-element arithmetic never touches the tables.
"""

from __future__ import annotations

import itertools
import math
import re
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    NotPrime,
    NotPrimitive,
    ReducibleModulus,
    ZeroInput,
)

__all__ = [
    "FieldSpec",
    "FieldElement",
    "FieldTables",
    "make_field",
    "parse_field",
    "find_generator",
    "is_kth_power",
    "dlog",
    "enumerate_field",
    "is_prime",
    "prime_factors",
    "is_irreducible",
]

MAX_Q = 3**10


# -- integers ---------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


# -- dense polynomials over F_p (coefficient lists, low degree first) --------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        t = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - t * c) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], n: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while n:
        if n & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        n >>= 1
    return result


def is_irreducible(modulus, p: int) -> bool:
    """Ben-Or test: f is irreducible iff gcd(Y^{p^i} - Y, f) = 1 for every i <= deg/2."""
    f = _trim([c % p for c in modulus])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    y = [0, 1]
    power = y
    for i in range(1, n // 2 + 1):
        power = _ppowmod(power, p, f, p)
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(f, _trim(diff), p)
        if len(g) - 1 > 0:
            return False
    return True


# -- fields -----------------------------------------------------------------


class FieldSpec:
    """The field F_{p^e} presented as F_p[Y]/(modulus).

    ``modulus`` is stored as a tuple of ``e + 1`` coefficients, low degree first,
    monic.  Instances are immutable; the generator and lookup tables are computed
    on first use and cached.
    """

    def __init__(self, p: int, e: int, modulus, declared_primitive: bool = False):
        self.p = p
        self.e = e
        self.modulus = tuple(int(c) % p for c in modulus)
        self.q = p**e
        self.declared_primitive = declared_primitive
        self._key = (p, e, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"FieldSpec({self.description})"

    def __reduce__(self):
        return (FieldSpec, (self.p, self.e, self.modulus, self.declared_primitive))

    @property
    def description(self) -> str:
        """ASCII form ``p^e/modulus``, e.g. ``3^4/x^4+2x^3+2``."""
        return f"{self.p}^{self.e}/{_format_fp_poly(self.modulus)}"

    # element construction

    def __call__(self, value) -> FieldElement:
        return self.element(value)

    def element(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, (int(value) % self.p,) + (0,) * (self.e - 1))
        coords = [int(c) % self.p for c in value]
        if len(coords) > self.e:
            raise ValueError(f"expected at most {self.e} coordinates, got {len(coords)}")
        coords += [0] * (self.e - len(coords))
        return FieldElement(self, tuple(coords))

    @cached_property
    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.e)

    @cached_property
    def one(self) -> FieldElement:
        return self.element(1)

    @cached_property
    def y(self) -> FieldElement:
        """Class of the indeterminate Y."""
        return self._reduce_list([0, 1])

    def _reduce_list(self, coeffs: list[int]) -> FieldElement:
        r = _pmod(list(coeffs), list(self.modulus), self.p)
        return FieldElement(self, tuple(r) + (0,) * (self.e - len(r)))

    def elements(self):
        return enumerate_field(self)

    # integer codes: c0-major, matching enumeration order

    @cached_property
    def _weights(self) -> tuple[int, ...]:
        return tuple(self.p ** (self.e - 1 - i) for i in range(self.e))

    def code(self, x: FieldElement) -> int:
        return sum(c * w for c, w in zip(x.coeffs, self._weights))

    def from_code(self, code: int) -> FieldElement:
        coords = []
        for w in self._weights:
            d, code = divmod(int(code), w)
            coords.append(d)
        return FieldElement(self, tuple(coords))

    @cached_property
    def generator(self) -> FieldElement:
        return find_generator(self)

    @cached_property
    def tables(self) -> FieldTables:
        return FieldTables(self)


class FieldElement:
    """Value type for an element of a :class:`FieldSpec`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _other(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        f = self.field
        if f.e == 1:
            return FieldElement(f, ((self.coeffs[0] * other.coeffs[0]) % f.p,))
        return f._reduce_list(_pmul(list(self.coeffs), list(other.coeffs), f.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> FieldElement:
        if not self:
            raise DivisionByZero("zero has no inverse")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self == self.field.element(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field._key, self.coeffs))

    def __repr__(self):
        return self.to_string()

    def __str__(self):
        if self.is_prime_subfield():
            return str(self.coeffs[0])
        return self.to_string()

    def to_string(self) -> str:
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"

    def is_prime_subfield(self) -> bool:
        return not any(self.coeffs[1:])

    @property
    def code(self) -> int:
        return self.field.code(self)

    def order(self) -> int:
        """Multiplicative order."""
        if not self:
            raise ZeroInput("zero has no multiplicative order")
        n = self.field.q - 1
        for r in prime_factors(n):
            while n % r == 0 and self ** (n // r) == self.field.one:
                n //= r
        return n


# module-level operation names


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def neg(x: FieldElement) -> FieldElement:
    return -x


def inv(x: FieldElement) -> FieldElement:
    return x.inverse()


def power(x: FieldElement, n: int) -> FieldElement:
    return x**n


# -- construction -------------------------------------------------------------


def make_field(p: int, e: int = 1, modulus=None, primitive: bool = False) -> FieldSpec:
    """Build F_{p^e}.

    ``modulus`` may be a coefficient list (low degree first, length e + 1) or a
    string such as ``"x^4+2x^3+2"``.  Without one, the smallest monic irreducible
    of degree ``e`` in low-degree-first lexicographic order is used.  With
    ``primitive=True`` the class of Y is checked to generate the multiplicative
    group and becomes the field's generator.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if p**e > MAX_Q:
        raise ValueError(f"field size {p}^{e} exceeds the supported bound {MAX_Q}")
    if modulus is None:
        mod = _default_modulus(p, e)
    else:
        if isinstance(modulus, str):
            modulus = _parse_fp_poly(modulus, p)
        mod = [int(c) % p for c in modulus]
        _trim(mod)
        if len(mod) != e + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {e}")
        if not is_irreducible(mod, p):
            raise ReducibleModulus(f"{_format_fp_poly(mod)} factors over F_{p}")
    field = FieldSpec(p, e, mod, declared_primitive=primitive)
    if primitive:
        # populate the cache now so a bad declaration fails at construction
        field.generator
    return field


@lru_cache(maxsize=None)
def _default_modulus(p: int, e: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=e):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def find_generator(field: FieldSpec) -> FieldElement:
    """Smallest element (enumeration order) of multiplicative order q - 1."""
    if field.declared_primitive:
        y = field.y
        if not y or y.order() != field.q - 1:
            raise NotPrimitive(f"{_format_fp_poly(field.modulus)} is not primitive over F_{field.p}")
        return y
    for x in enumerate_field(field):
        if x and x.order() == field.q - 1:
            return x
    raise AssertionError("multiplicative group has no generator")  # pragma: no cover


def is_kth_power(x: FieldElement, k: int) -> bool:
    if not x:
        raise ZeroInput("power-residue test needs a nonzero element")
    q = x.field.q
    return x ** ((q - 1) // math.gcd(k, q - 1)) == x.field.one


def dlog(field: FieldSpec, x: FieldElement, generator: FieldElement | None = None) -> int:
    """Discrete logarithm base the field generator, by baby-step giant-step."""
    x = field.element(x)
    if not x:
        raise ZeroInput("zero has no discrete logarithm")
    g = field.generator if generator is None else field.element(generator)
    n = field.q - 1
    m = math.isqrt(n - 1) + 1 if n > 1 else 1
    baby = {}
    cur = field.one
    for j in range(m):
        baby.setdefault(cur.coeffs, j)
        cur = cur * g
    step = g ** (n - m)  # g^{-m}
    gamma = x
    for i in range(m + 1):
        j = baby.get(gamma.coeffs)
        if j is not None:
            return (i * m + j) % n
        gamma = gamma * step
    raise ValueError("element is not a power of the generator")


def enumerate_field(field: FieldSpec):
    """Yield every element once: zero first, then in coordinate order."""
    for coords in itertools.product(range(field.p), repeat=field.e):
        yield FieldElement(field, coords)


# -- textual forms -------------------------------------------------------------

_FIELD_RE = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*(?:/\s*(.+?))?\s*$")


def parse_field(text: str, primitive: bool = False) -> FieldSpec:
    """Parse ``"p^e"`` or ``"p^e/modulus"``, e.g. ``"3^4/x^4+2x^3+2"``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ValueError(f"bad field description {text!r}")
    p = int(m.group(1))
    e = int(m.group(2) or 1)
    return make_field(p, e, m.group(3), primitive=primitive)


_MONO_RE = re.compile(r"^(\d*)\*?(?:([xy])(?:\^(\d+))?)?$")


def _parse_fp_poly(text: str, p: int) -> list[int]:
    s = text.replace(" ", "").lower().replace("y", "x")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, int] = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _MONO_RE.match(body)
        if not m or (not m.group(1) and not m.group(2)):
            raise ValueError(f"bad term {body!r} in {text!r}")
        c = int(m.group(1)) if m.group(1) else 1
        n = (int(m.group(3)) if m.group(3) else 1) if m.group(2) else 0
        coeffs[n] = coeffs.get(n, 0) + (c if sign == "+" else -c)
    out = [0] * (max(coeffs) + 1)
    for n, c in coeffs.items():
        out[n] = c % p
    return _trim(out)


def _format_fp_poly(coeffs) -> str:
    parts = []
    for n in range(len(coeffs) - 1, -1, -1):
        c = coeffs[n]
        if not c:
            continue
        if n == 0:
            parts.append(str(c))
            continue
        mono = "x" if n == 1 else f"x^{n}"
        parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(parts) or "0"


# -- bulk tables ---------------------------------------------------------------


class FieldTables:
    """Vectorised arithmetic on integer element codes.

    ``exp[i]`` is the code of g^i and ``log[c]`` the exponent of the element with
    code ``c`` (``-1`` for zero).  Codes follow the enumeration order.
    """

    def __init__(self, field: FieldSpec):
        self.field = field
        p, e, q = field.p, field.e, field.q
        self.q = q
        self.order = q - 1
        self.weights = np.array(field._weights, dtype=np.int64)
        self.digits = np.array(list(itertools.product(range(p), repeat=e)), dtype=np.int64)
        g = field.generator
        exp = np.empty(q - 1, dtype=np.int64)
        cur = field.one
        for i in range(q - 1):
            exp[i] = field.code(cur)
            cur = cur * g
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        self.exp = exp
        self.log = log
        self.codes = np.arange(q, dtype=np.int64)

    def add(self, a, b):
        p = self.field.p
        return ((self.digits[a] + self.digits[b]) % p) @ self.weights

    def sub(self, a, b):
        p = self.field.p
        return ((self.digits[a] - self.digits[b]) % p) @ self.weights

    def combine(self, code_arrays, signs=None):
        """Sum (or signed sum) of several code arrays in one reduction."""
        p = self.field.p
        acc = None
        for i, arr in enumerate(code_arrays):
            d = self.digits[arr]
            if signs is not None and signs[i] < 0:
                d = -d
            acc = d if acc is None else acc + d
        return (acc % p) @ self.weights

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp[(self.log[a] + self.log[b]) % self.order]
        return np.where((a == 0) | (b == 0), 0, out)

    def scaled_power(self, coeff_log: int, n: int, x=None):
        """Codes of c * x^n over ``x`` (all elements by default); ``coeff_log`` is log c."""
        x = self.codes if x is None else np.asarray(x)
        if n == 0:
            return np.full(x.shape, self.exp[coeff_log % self.order], dtype=np.int64)
        out = self.exp[(coeff_log + n * self.log[x]) % self.order]
        return np.where(x == 0, 0, out)
