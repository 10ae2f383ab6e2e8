"""Weil-bound intervals kept exact, threshold solving, and brute-force zero counts.

For an absolutely irreducible curve of degree ``deg`` over F_q the affine zero
count N satisfies

    q + 1 - deg - c sqrt(q) <= N <= q + 1 + c sqrt(q),   c = (deg-1)(deg-2).

Endpoints are stored as ``A + B sqrt(q)`` with integer A, B and compared against
integers by sign analysis and squaring, never through floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import FieldTooLarge
from .finite_field import is_prime
from .polynomial import BivariatePoly

__all__ = [
    "Surd",
    "WeilBound",
    "weil_interval",
    "min_e_exceeding",
    "count_bivariate_zeros",
    "xy_zero_solutions",
    "COUNT_Q_MAX",
]

COUNT_Q_MAX = 3**7


@dataclass(frozen=True)
class Surd:
    """The real number ``a + b sqrt(q)``."""

    a: int
    b: int
    q: int

    def sign_minus(self, n: int) -> int:
        """Sign of ``self - n``."""
        A, B = self.a - n, self.b
        if B == 0:
            return (A > 0) - (A < 0)
        # A + B sqrt(q): compare |A| with |B| sqrt(q) by squaring
        lhs, rhs = A * A, B * B * self.q
        if A >= 0 and B >= 0:
            return 1 if (A or B) else 0
        if A <= 0 and B <= 0:
            return -1
        if A > 0:  # B < 0
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)  # A < 0 < B

    def __le__(self, n):
        return self.sign_minus(n) <= 0

    def __ge__(self, n):
        return self.sign_minus(n) >= 0

    def __lt__(self, n):
        return self.sign_minus(n) < 0

    def __gt__(self, n):
        return self.sign_minus(n) > 0

    def floor(self) -> int:
        """Exact floor, via isqrt of b^2 q."""
        r = isqrt(self.b * self.b * self.q)
        exact = r * r == self.b * self.b * self.q
        if self.b >= 0:
            return self.a + r
        return self.a - r - (0 if exact else 1)

    def __float__(self):
        return self.a + self.b * self.q**0.5

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.q})"


@dataclass(frozen=True)
class WeilBound:
    q: int
    deg: int
    lower: Surd
    upper: Surd
    N: int | None = None

    def contains(self, n: int) -> bool:
        return self.lower <= n and self.upper >= n

    def to_json(self) -> dict:
        out = {
            "q": self.q, "deg": self.deg,
            "lower": {"int": self.lower.a, "sqrt_coeff": self.lower.b, "text": str(self.lower),
                      "approx": float(self.lower)},
            "upper": {"int": self.upper.a, "sqrt_coeff": self.upper.b, "text": str(self.upper),
                      "approx": float(self.upper)},
        }
        if self.N is not None:
            out["N"] = self.N
            out["inside"] = self.contains(self.N)
        return out


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while q % p:
        p += 1
    while q % p == 0:
        q //= p
    return q == 1 and is_prime(p)


def weil_interval(q: int, deg: int, N: int | None = None) -> WeilBound:
    if not _is_prime_power(q):
        raise ValueError(f"{q} is not a prime power")
    if deg < 1:
        raise ValueError("degree must be >= 1")
    c = (deg - 1) * (deg - 2)
    return WeilBound(q, deg, Surd(q + 1 - deg, -c, q), Surd(q + 1, c, q), N)


def min_e_exceeding(p: int, deg: int, boundary: int, e_max: int = 200) -> dict:
    """Smallest ``e`` with ``p^e + 1 - deg - c sqrt(p^e) > boundary``.

    With ``A = q + 1 - deg - boundary`` this holds iff ``A > 0`` and
    ``A^2 > c^2 q``.  Returns ``{"min_e": e, "check": {...}}`` where the check
    carries the two squared sides at that ``e``.
    """
    if p < 3 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    c = (deg - 1) * (deg - 2)
    for e in range(1, e_max + 1):
        q = p**e
        A = q + 1 - deg - boundary
        if A > 0 and A * A > c * c * q:
            return {"p": p, "deg": deg, "boundary": boundary, "min_e": e,
                    "check": {"e": e, "lhs_sq": A * A, "rhs_sq": c * c * q}}
    raise ValueError(f"no e <= {e_max} satisfies the inequality")


def count_bivariate_zeros(h: BivariatePoly, chunk: int = 128) -> int:
    """Exact number of (x, y) in F_q^2 with h(x, y) = 0."""
    F = h.field
    if F.q > COUNT_Q_MAX:
        raise FieldTooLarge(f"q = {F.q} exceeds {COUNT_Q_MAX}")
    codes = F.tables.codes
    total = 0
    for start in range(0, F.q, chunk):
        total += int(np.count_nonzero(h.eval_grid(codes[start:start + chunk], codes) == 0))
    return total


def xy_zero_solutions(h: BivariatePoly) -> int:
    """Zeros of h lying on the axes (x = 0 or y = 0), origin counted once."""
    F = h.field
    codes = F.tables.codes
    zero = np.zeros(1, dtype=np.int64)
    on_y = int(np.count_nonzero(h.eval_grid(zero, codes) == 0))  # x = 0
    on_x = int(np.count_nonzero(h.eval_grid(codes, zero) == 0))  # y = 0
    origin = int(h.eval_grid(zero, zero)[0, 0] == 0)
    return on_y + on_x - origin
