"""Dembowski-Ostrom classification of the composed Dickson polynomials.

A polynomial is DO when every exponent is a sum of two powers of p.  Whether
``D_{k,m}(X^d, a) - D_{k,m}(0, a)`` is DO depends only on ``(k, m mod p, d, p)``:
each coefficient is an integer times a power of ``a``, so for ``a != 0`` a term
survives exactly when its integer coefficient is nonzero mod p.

:func:`is_do` decides this directly.  :func:`theorem_predicate` encodes the
closed-form classification (the parameter families for which DO-ness is
claimed), and :func:`classify_sweep` compares the two over a grid.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .dickson import frak_d
from .errors import NotPrime, UnsupportedCharacteristic
from .finite_field import is_prime

__all__ = [
    "DOVerdict",
    "FormWitness",
    "SweepRow",
    "AppendixTerm",
    "AppendixFamily",
    "is_p_power_sum",
    "is_do",
    "form_witness",
    "theorem_predicate",
    "theorem_rule",
    "classify_sweep",
    "appendix_table",
    "verify_appendix",
    "sweep_to_csv",
    "sweep_to_json",
]


@lru_cache(maxsize=None)
def is_p_power_sum(n: int, p: int) -> tuple[int, int] | None:
    """Witness ``(i, j)`` with ``i <= j`` and ``p^i + p^j == n`` (smallest i), else None."""
    if n < 2:
        return None
    i, pi = 0, 1
    while 2 * pi <= n:
        r = n - pi
        j, pj = i, pi
        while pj < r:
            pj *= p
            j += 1
        if pj == r:
            return (i, j)
        i += 1
        pi *= p
    return None


def _check_p(p: int):
    if p == 2:
        raise UnsupportedCharacteristic("characteristic 2 is not supported")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


@dataclass(frozen=True)
class DOVerdict:
    is_do: bool
    surviving_terms: tuple[tuple[int, int], ...]  # (exponent, coefficient mod p)
    decompositions: dict = field(default_factory=dict)  # exponent -> (i, j)
    offending_term: int | None = None  # highest-degree exponent with no decomposition

    def __bool__(self):
        return self.is_do

    def witness_string(self, p: int) -> str:
        if not self.is_do:
            return f"offending={self.offending_term}"
        return ";".join(f"{n}={p}^{i}+{p}^{j}" for n, (i, j) in sorted(self.decompositions.items(), reverse=True))


@lru_cache(maxsize=None)
def _surviving(k: int, m_res: int, p: int) -> tuple[tuple[int, int, int], ...]:
    # (i, c mod p, k - 2i) for terms of frak_d(k, m) nonzero mod p
    return tuple(frak_d(k=k, m=m_res).nonzero_terms(p))


def is_do(k: int, m: int, d: int, p: int) -> DOVerdict:
    """Is ``D_{k,m}(X^d, a) - D_{k,m}(0, a)`` DO over characteristic ``p`` (for a != 0)?"""
    _check_p(p)
    if k < 1 or d < 1:
        raise ValueError("need k >= 1 and d >= 1")
    terms = _surviving(k, m % p, p)
    surviving = tuple((n * d, c) for _, c, n in terms)
    decomps = {}
    bad = []
    for n, _ in surviving:
        w = is_p_power_sum(n, p)
        if w is None:
            bad.append(n)
        else:
            decomps[n] = w
    if bad:
        return DOVerdict(False, surviving, decomps, max(bad))
    return DOVerdict(True, surviving, decomps)


@dataclass(frozen=True)
class FormWitness:
    """``p^n (p^alpha + 1) == c * d``."""

    n: int
    alpha: int
    c: int
    d: int
    p: int


def form_witness(d: int, p: int, c: int = 1) -> FormWitness | None:
    """Find ``(n, alpha)`` with ``p^n (p^alpha + 1) = c d``, if any."""
    if d < 1 or c not in (1, 2, 3, 4):
        raise ValueError("need d >= 1 and c in {1, 2, 3, 4}")
    target = c * d
    n, pn = 0, 1
    while pn <= target:
        if target % pn == 0:
            rest = target // pn - 1
            alpha, pa = 0, 1
            while pa < rest:
                pa *= p
                alpha += 1
            if pa == rest:
                return FormWitness(n, alpha, c, d, p)
        n += 1
        pn *= p
    return None


def _is_scaled_power(d: int, c: int, p: int) -> bool:
    """d == c * p^n for some n >= 0."""
    if d % c:
        return False
    d //= c
    while d % p == 0:
        d //= p
    return d == 1


def _k_matches(k: int, kind: str, value: int, p: int) -> bool:
    if kind == "eq":
        return k == value
    # k == value * p^l
    return _is_scaled_power(k, value, p)


def _d_matches(d: int, kind: str, c: int, p: int) -> bool:
    if kind == "form":
        return form_witness(d, p, c) is not None
    return _is_scaled_power(d, c, p)


# Rules: (k kind, k value, d kind, d constant).
#   k kinds: "eq" (k == value) or "pmult" (k == value * p^l)
#   d kinds: "form" (c d = p^n (p^alpha + 1)) or "scaled" (d = c p^n)
def _eqs(ks, d_kind, c=None):
    return [("eq", k, d_kind, k if c is None else c) for k in ks]


_MONO = _eqs([1, 2], "form")

_RULES: dict[tuple[object, int], list[tuple[str, int, str, int]]] = {
    (3, 0): [("pmult", 1, "form", 1), ("pmult", 2, "form", 2),
             ("pmult", 4, "scaled", 1), ("pmult", 5, "scaled", 2)],
    (3, 1): _eqs([1, 2, 4], "form") + [("eq", 3, "form", 1)]
            + _eqs([5], "scaled", 2) + _eqs([6, 10, 12], "scaled", 1) + _eqs([7, 9], "scaled", 4),
    (3, 2): _MONO + [("eq", 3, "form", 1)] + _eqs([4, 6, 12], "scaled", 1)
            + _eqs([5], "scaled", 2) + _eqs([9], "scaled", 4),
    (5, 0): [("pmult", 1, "form", 1), ("pmult", 2, "form", 2), ("pmult", 3, "scaled", 2)],
    (5, 1): _MONO + _eqs([3, 5], "scaled", 2) + _eqs([6], "scaled", 1),
    (5, 2): _MONO + _eqs([3, 5], "scaled", 2),
    (5, 3): _eqs([1, 2, 3], "form") + _eqs([5], "scaled", 2),
    (5, 4): _eqs([1, 2, 4], "form") + _eqs([3, 5], "scaled", 2),
    ("large", 0): [("pmult", 1, "form", 1), ("pmult", 2, "form", 2)],
    ("large", 1): _MONO,
    ("large", 2): _MONO,
    ("large", 3): _eqs([1, 2, 3], "form"),
    ("large", 4): _eqs([1, 2, 4], "form"),
    ("large", "rest"): _MONO,
}


def _rules_for(m: int, p: int):
    m_res = m % p
    if p in (3, 5):
        return _RULES[(p, m_res)]
    return _RULES[("large", m_res if m_res <= 4 else "rest")]


def theorem_rule(k: int, m: int, d: int, p: int) -> str | None:
    """Human-readable description of the family containing (k, m, d, p), or None."""
    _check_p(p)
    for k_kind, k_val, d_kind, c in _rules_for(m, p):
        if _k_matches(k, k_kind, k_val, p) and _d_matches(d, d_kind, c, p):
            k_desc = f"k={k_val}" if k_kind == "eq" else f"k={k_val}*p^l"
            if d_kind == "form":
                d_desc = "d=p^n(p^alpha+1)" + (f"/{c}" if c > 1 else "")
            else:
                d_desc = "d=" + (f"{c}*" if c > 1 else "") + "p^n"
            return f"{k_desc}, {d_desc}"
    return None


def theorem_predicate(k: int, m: int, d: int, p: int) -> bool:
    """True iff (k, m, d, p) lies in one of the classified DO families."""
    return theorem_rule(k, m, d, p) is not None


# -- sweeps ----------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    k: int
    m: int
    d: int
    p: int
    verdict: DOVerdict
    predicted: bool

    @property
    def mismatch(self) -> bool:
        return self.verdict.is_do != self.predicted


def _sweep_k(args):
    p, k, m_range, d_max = args
    rows = []
    for m in m_range:
        for d in range(1, d_max + 1):
            rows.append(SweepRow(k, m, d, p, is_do(k, m, d, p), theorem_predicate(k, m, d, p)))
    return rows


def classify_sweep(p: int, k_max: int = 40, m_range=None, d_max: int = 200, workers: int = 1) -> list[SweepRow]:
    """Compare :func:`is_do` with :func:`theorem_predicate` on the whole grid.

    Rows come back ordered by (k, m, d) with mismatching rows moved to the front.
    """
    _check_p(p)
    if k_max < 1 or d_max < 1:
        raise ValueError("bounds must be >= 1")
    m_range = list(range(p)) if m_range is None else list(m_range)
    jobs = [(p, k, m_range, d_max) for k in range(1, k_max + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_k, jobs))
    else:
        chunks = [_sweep_k(j) for j in jobs]
    rows = [r for chunk in chunks for r in chunk]
    return sorted(rows, key=lambda r: not r.mismatch)


def sweep_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "m", "d", "p", "is_do", "predicted", "witnesses"])
    for r in rows:
        w.writerow([r.k, r.m, r.d, r.p, int(r.verdict.is_do), int(r.predicted), r.verdict.witness_string(r.p)])
    return buf.getvalue()


def sweep_to_json(rows: list[SweepRow], only_do: bool = False) -> list[dict]:
    out = []
    for r in rows:
        if only_do and not (r.verdict.is_do or r.predicted):
            continue
        out.append({
            "k": r.k, "m": r.m, "d": r.d, "p": r.p,
            "is_do": r.verdict.is_do, "predicted": r.predicted,
            "witnesses": r.verdict.witness_string(r.p),
        })
    return out


# -- the complete DO family table ---------------------------------------------------


@dataclass(frozen=True)
class AppendixTerm:
    """``coeff * a^a_power * X^E`` with ``E = mult * B * p^(n + shift [+ l])``.

    ``B`` is ``p^alpha + 1`` when ``uses_alpha`` is set, else 1.
    """

    coeff: int
    a_power: int
    mult: int
    shift: int = 0
    uses_alpha: bool = False

    def exponent(self, p: int, n: int, alpha: int = 0, ell: int = 0) -> int:
        base = p**alpha + 1 if self.uses_alpha else 1
        return self.mult * base * p ** (n + self.shift + ell)

    def exponent_text(self, p: int, with_ell: bool) -> str:
        e = "n" + (f"+{self.shift}" if self.shift else "") + ("+l" if with_ell else "")
        power = f"{p}^({e})" if ("+" in e) else f"{p}^{e}"
        parts = [] if self.mult == 1 else [str(self.mult)]
        parts.append(power)
        if self.uses_alpha:
            parts.append(f"({p}^alpha+1)")
        return "*".join(parts)


@dataclass(frozen=True)
class AppendixFamily:
    p: int | None  # None: every p > 5
    m_residue: int | None  # None: every residue
    k_base: int
    terms: tuple[AppendixTerm, ...]
    k_uses_ell: bool = False
    note: str = ""

    @property
    def uses_alpha(self) -> bool:
        return any(t.uses_alpha for t in self.terms)

    @property
    def parameters(self) -> list[str]:
        out = ["n"]
        if self.uses_alpha:
            out.append("alpha")
        if self.k_uses_ell:
            out.append("l")
        return out

    def k_pattern(self) -> str:
        if self.k_uses_ell:
            return ("" if self.k_base == 1 else f"{self.k_base}*") + "p^l"
        return str(self.k_base)

    def render(self, p: int | None = None) -> str:
        p = p or self.p or "p"
        parts = []
        for t in self.terms:
            a = "" if t.a_power == 0 else ("a" if t.a_power == 1 else f"a^{t.a_power}")
            c = "" if t.coeff == 1 else str(t.coeff)
            parts.append(f"{c}{a}X^({t.exponent_text(p, self.k_uses_ell)})")
        return " + ".join(parts)

    def to_json(self, p: int | None = None) -> dict:
        p_eff = p or self.p
        return {
            "p": self.p if self.p is not None else "p>5",
            "m_residue": self.m_residue if self.m_residue is not None else "any",
            "k_pattern": self.k_pattern(),
            "exponents": [t.exponent_text(p_eff or "p", self.k_uses_ell) for t in self.terms],
            "coefficients": [{"int": t.coeff, "a_power": t.a_power} for t in self.terms],
            "parameters": self.parameters,
            "polynomial": self.render(p_eff),
            **({"note": self.note} if self.note else {}),
        }

    def instance(self, p: int, n: int, alpha: int = 0, ell: int = 0):
        """``(k, d, expected)`` where expected maps exponent -> (coeff mod p, a power).

        ``None`` when ``d`` would not be an integer.  For ``k = c p^l`` the power
        of ``a`` is the listed one times ``p^l`` (the listing writes ``a`` for
        ``a^{p^l}``, which ranges over the same set).
        """
        k = self.k_base * (p**ell if self.k_uses_ell else 1)
        lead = self.terms[0].exponent(p, n, alpha, ell if self.k_uses_ell else 0)
        if lead % k:
            return None
        d = lead // k
        twist = p**ell if self.k_uses_ell else 1
        expected = {}
        for t in self.terms:
            e = t.exponent(p, n, alpha, ell if self.k_uses_ell else 0)
            expected[e] = (t.coeff % p, t.a_power * twist)
        return k, d, expected


def _T(coeff, a_power, mult, shift=0, alpha=False):
    return AppendixTerm(coeff, a_power, mult, shift, alpha)


_MONO_TERM = (_T(1, 0, 1, 0, True),)


def _appendix_p3() -> list[AppendixFamily]:
    F = AppendixFamily
    return [
        # m = 0 mod 3
        F(3, 0, 1, _MONO_TERM, k_uses_ell=True),
        F(3, 0, 2, _MONO_TERM, k_uses_ell=True),
        F(3, 0, 4, (_T(1, 0, 4), _T(2, 1, 2)), k_uses_ell=True),
        F(3, 0, 5, (_T(1, 0, 10), _T(1, 1, 2, 1), _T(2, 2, 2)), k_uses_ell=True),
        # m = 1 mod 3
        F(3, 1, 1, _MONO_TERM),
        F(3, 1, 2, _MONO_TERM),
        F(3, 1, 4, _MONO_TERM),
        F(3, 1, 3, (_T(1, 0, 1, 1, True), _T(1, 1, 1, 0, True))),
        F(3, 1, 5, (_T(1, 0, 10), _T(2, 1, 2, 1))),
        F(3, 1, 6, (_T(1, 0, 2, 1), _T(1, 1, 4))),
        F(3, 1, 7, (_T(1, 0, 28), _T(1, 2, 4, 1), _T(2, 3, 4))),
        F(3, 1, 9, (_T(1, 0, 4, 2), _T(1, 1, 28), _T(1, 3, 4, 1), _T(2, 4, 4))),
        F(3, 1, 10, (_T(1, 0, 10), _T(1, 2, 2, 1), _T(1, 3, 4))),
        F(3, 1, 12, (_T(1, 0, 4, 1), _T(1, 1, 10), _T(1, 4, 4))),
        # m = 2 mod 3
        F(3, 2, 1, _MONO_TERM),
        F(3, 2, 2, _MONO_TERM),
        F(3, 2, 3, (_T(1, 0, 1, 1, True), _T(2, 1, 1, 0, True))),
        F(3, 2, 4, (_T(1, 0, 4), _T(1, 1, 2))),
        F(3, 2, 5, (_T(1, 0, 10), _T(1, 2, 2))),
        F(3, 2, 6, (_T(1, 0, 2, 1), _T(2, 1, 4))),
        F(3, 2, 9, (_T(1, 0, 4, 2), _T(2, 1, 28), _T(2, 3, 4, 1), _T(1, 4, 4))),
        F(3, 2, 12, (_T(1, 0, 4, 1), _T(2, 1, 10), _T(1, 3, 2, 1), _T(2, 4, 4))),
    ]


def _appendix_p5() -> list[AppendixFamily]:
    F = AppendixFamily
    return [
        # m = 0 mod 5
        F(5, 0, 1, _MONO_TERM, k_uses_ell=True),
        F(5, 0, 2, _MONO_TERM, k_uses_ell=True),
        F(5, 0, 3, (_T(1, 0, 6), _T(2, 1, 2)), k_uses_ell=True),
        # m = 1 mod 5
        F(5, 1, 1, _MONO_TERM),
        F(5, 1, 2, _MONO_TERM),
        F(5, 1, 3, (_T(1, 0, 6), _T(3, 1, 2))),
        F(5, 1, 5, (_T(1, 0, 2, 1), _T(1, 1, 6), _T(3, 2, 2))),
        F(5, 1, 6, (_T(1, 0, 6), _T(1, 2, 2)),
          note="leading exponent 6*5^n forces k=6; this is the reduction of E_6 mod 5"),
        # m = 2 mod 5
        F(5, 2, 1, _MONO_TERM),
        F(5, 2, 2, _MONO_TERM),
        F(5, 2, 3, (_T(1, 0, 6), _T(4, 1, 2))),
        F(5, 2, 5, (_T(1, 0, 2, 1), _T(2, 1, 6), _T(1, 2, 2))),
        # m = 3 mod 5
        F(5, 3, 1, _MONO_TERM),
        F(5, 3, 2, _MONO_TERM),
        F(5, 3, 3, _MONO_TERM),
        F(5, 3, 5, (_T(1, 0, 2, 1), _T(3, 1, 6), _T(4, 2, 2))),
        # m = 4 mod 5
        F(5, 4, 1, _MONO_TERM),
        F(5, 4, 2, _MONO_TERM),
        F(5, 4, 4, _MONO_TERM),
        F(5, 4, 3, (_T(1, 0, 6), _T(1, 1, 2))),
        F(5, 4, 5, (_T(1, 0, 2, 1), _T(4, 1, 6), _T(2, 2, 2))),
    ]


def appendix_table(p: int) -> list[AppendixFamily]:
    """Every DO family of the composed Dickson polynomials in characteristic ``p``."""
    _check_p(p)
    if p == 3:
        return _appendix_p3()
    if p == 5:
        return _appendix_p5()
    return [AppendixFamily(None, None, 1, _MONO_TERM)]


@dataclass
class FamilyCheck:
    family: AppendixFamily
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_appendix(p: int, nmax: int = 2) -> list[FamilyCheck]:
    """Instantiate each family for n, alpha, l <= nmax and compare against :func:`is_do`.

    An instance passes when the verdict is DO and its surviving terms equal the
    listed ones (exponent, coefficient mod p, power of a).  Instances whose ``d``
    is not an integer are counted as skipped.
    """
    out = []
    for fam in appendix_table(p):
        chk = FamilyCheck(fam)
        residues = [fam.m_residue] if fam.m_residue is not None else list(range(p))
        alphas = range(nmax + 1) if fam.uses_alpha else [0]
        ells = range(nmax + 1) if fam.k_uses_ell else [0]
        for n in range(nmax + 1):
            for alpha in alphas:
                for ell in ells:
                    inst = fam.instance(p, n, alpha, ell)
                    if inst is None:
                        chk.skipped += 1
                        continue
                    k, d, expected = inst
                    for m in residues:
                        chk.checked += 1
                        verdict = is_do(k, m, d, p)
                        got = {e: (c, i) for i, c, e in
                               ((i, c, n0 * d) for i, c, n0 in _surviving(k, m % p, p))}
                        if not verdict.is_do or got != expected:
                            chk.failures.append({"n": n, "alpha": alpha, "l": ell, "m": m, "k": k, "d": d,
                                                 "is_do": verdict.is_do, "got": got, "expected": expected})
        out.append(chk)
    return out


def appendix_json(p: int) -> str:
    return json.dumps([f.to_json(p) for f in appendix_table(p)], indent=2)
