"""``dodickson`` command line.

Subcommands: ``dickson``, ``classify``, ``planar``, ``weil``, ``appendix``.
Exit status is 0 when everything checked holds, 2 when a computed result
disagrees with the claimed one, and 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time

from . import __version__
from .dickson import dickson_symbolic, format_symbolic, frak_d, instantiate, parse_dickson_spec
from .do_classify import appendix_table, classify_sweep, sweep_to_csv, sweep_to_json, verify_appendix
from .errors import DoDicksonError
from .finite_field import FieldSpec, make_field, parse_field
from .planarity import (
    decomposition_check,
    is_planar_definition,
    is_planar_do,
    is_do_shaped,
    monomial_law_sweep,
    nonplanarity_claims,
    planar_set_sweep,
    reproduce_planar_list,
)
from .polynomial import format_poly, parse, parse_bivariate, parse_family
from .weil import count_bivariate_zeros, min_e_exceeding, weil_interval, xy_zero_solutions

WORKERS_ENV = "DODICKSON_WORKERS"
SCHEMA_VERSION = 1

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH = 0, 1, 2


class _Result:
    def __init__(self, payload, text: str, ok: bool = True, field: FieldSpec | None = None, csv: str | None = None):
        self.payload = payload
        self.text = text
        self.ok = ok
        self.field = field
        self.csv = csv


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return max(1, args.workers)
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _resolve_a(text, F: FieldSpec):
    """``a`` as an integer, a coordinate tuple ``(c0,c1,..)`` or ``g^k`` for the field generator."""
    if text is None:
        return None
    s = str(text).strip()
    m = re.fullmatch(r"g(?:\^(-?\d+))?", s)
    if m:
        return F.generator ** int(m.group(1) or 1)
    if s.startswith("("):
        return F.element(tuple(int(c) for c in s.strip("()").split(",") if c.strip()))
    return F.element(int(s))


def _field_arg(text: str | None, p: int | None = None) -> FieldSpec:
    if text:
        return parse_field(text)
    if p is None:
        raise DoDicksonError("need --field or --p")
    return make_field(p)


# -- dickson ------------------------------------------------------------


def cmd_dickson(args) -> _Result:
    vals = {"k": args.k, "m": args.m, "d": args.d, "p": args.p, "a": args.a}
    if args.spec:
        try:
            parsed = parse_dickson_spec(args.spec)
        except ValueError as exc:
            raise DoDicksonError(str(exc)) from exc
        vals.update({k: v for k, v in parsed.items()})
    if vals["k"] is None or vals["m"] is None:
        raise DoDicksonError("need k and m")
    k, m, d = vals["k"], vals["m"], vals["d"] or 1
    sym = frak_d(k=k, m=m, d=d) if args.strip else dickson_symbolic(k, m)
    if not args.strip and d > 1:
        sym = type(sym)(k, m, tuple((i, c, n * d) for i, c, n in sym.terms), d)
    payload = {"k": k, "m": m, "d": d, "symbolic": format_symbolic(sym)}
    lines = [f"symbolic: {payload['symbolic']}"]
    F = None
    if vals["p"] is not None or args.field:
        F = _field_arg(args.field, vals["p"])
        payload["field"] = F.description
        payload["mod_p"] = format_symbolic(sym, F.p)
        lines.append(f"mod {F.p}: {payload['mod_p']}")
        if vals["a"] is not None:
            a = _resolve_a(vals["a"], F)
            f = instantiate(sym, F, a)
            payload["a"] = a.to_string()
            payload["instantiated"] = format_poly(f)
            lines.append(f"a={a}: {payload['instantiated']}")
    return _Result(payload, "\n".join(lines), field=F)


# -- classify ---------------------------------------------------------------


def _m_range(text: str, p: int):
    if text in (None, "all"):
        return list(range(p))
    return [int(x) for x in text.split(",")]


def cmd_classify(args) -> _Result:
    rows = classify_sweep(args.p, args.kmax, _m_range(args.m, args.p), args.dmax, workers=_workers(args))
    mism = [r for r in rows if r.mismatch]
    n_do = sum(r.verdict.is_do for r in rows)
    summary = {"p": args.p, "kmax": args.kmax, "dmax": args.dmax, "m": args.m, "rows": len(rows),
               "do_rows": n_do, "mismatches": len(mism)}
    lines = [f"p={args.p} k<={args.kmax} d<={args.dmax} m={args.m}: {len(rows)} cases, {n_do} DO",
             f"{len(mism)} mismatches"]
    for r in mism[:20]:
        lines.append(f"  mismatch k={r.k} m={r.m} d={r.d}: is_do={r.verdict.is_do} predicted={r.predicted}")
    payload = {"summary": summary, "rows": sweep_to_json(rows, only_do=not args.all_rows)}
    return _Result(payload, "\n".join(lines), ok=not mism, csv=sweep_to_csv(rows))


# -- planar -----------------------------------------------------------------


def _items_text(items) -> str:
    lines = []
    for it in items:
        tag = "PASS" if it.ok else "FAIL"
        part = " (partial)" if it.partial else ""
        lines.append(f"[{tag}] item {it.item} {it.field}: {it.description}{part}  expected={it.expected} observed={it.observed}")
    return "\n".join(lines)


def cmd_planar(args) -> _Result:
    if args.reproduce:
        what = args.reproduce
        if what in ("thm63", "planar-list"):
            items = reproduce_planar_list(max_e=args.max_e, sample_e9=args.sample_e9)
        elif what == "nonplanar":
            items = nonplanarity_claims(max_e=args.max_e)
        elif what == "monomial-law":
            law = monomial_law_sweep(e_max=args.max_e)
            ok = law["summary"]["e_rule"]["mismatches"] == 0
            text = "\n".join(f"{rule}: {v['mismatches']} mismatches" for rule, v in law["summary"].items())
            return _Result(law["summary"], text, ok=ok)
        elif what == "decomposition":
            div = decomposition_check(e_max=args.max_e)
            return _Result({"divergences": div}, f"{len(div)} divergences", ok=not div)
        else:
            raise DoDicksonError(f"unknown reproduction {what!r}")
        payload = {"items": [it.to_json() for it in items], "all_ok": all(it.ok for it in items)}
        return _Result(payload, _items_text(items), ok=payload["all_ok"])

    if not args.poly:
        raise DoDicksonError("need --poly (or --reproduce)")
    F = _field_arg(args.field)
    t0 = time.perf_counter()
    if args.sweep_a:
        fam = parse_family(args.poly, F)
        res = planar_set_sweep(fam, F, method=args.method, workers=_workers(args))
        payload = res.to_json()
        payload["runtime_ms"] = round(1000 * (time.perf_counter() - t0))
        pat = payload["residue_pattern"]
        text = [f"planar for {len(res.planar_codes)} of {len(res.tested)} values of a"]
        text.append("a in {" + ", ".join(str(e) for e in res.elements) + "}")
        if pat:
            text.append(f"dlog residues mod {pat['modulus']}: {pat['residues']}")
        return _Result(payload, "\n".join(text), field=F)
    f = parse(args.poly, F, a=_resolve_a(args.a, F))
    if args.method == "definition" or (args.method == "auto" and not is_do_shaped(f)):
        rep = is_planar_definition(f)
    else:
        rep = is_planar_do(f)
    payload = rep.to_json()
    text = f"{'planar' if rep.planar else 'not planar'} ({rep.method})"
    if rep.witness:
        text += f" witness={payload['witness']}"
    return _Result(payload, text, field=F)


# -- weil -------------------------------------------------------------------


def cmd_weil(args) -> _Result:
    if args.weil_cmd == "min-e":
        res = min_e_exceeding(args.p, args.deg, args.boundary)
        return _Result(res, str(res["min_e"]))
    if args.weil_cmd == "interval":
        wb = weil_interval(args.q, args.deg)
        lo, hi = wb.lower, wb.upper
        text = f"[{lo}, {hi}]" if lo.b else f"[{lo.a}, {hi.a}]"
        return _Result(wb.to_json(), text)
    F = _field_arg(args.field)
    h = parse_bivariate(args.h, F, a=_resolve_a(args.a, F))
    n = count_bivariate_zeros(h)
    axes = xy_zero_solutions(h)
    deg = h.total_degree
    wb = weil_interval(F.q, int(deg), n) if deg >= 1 else None
    payload = {"field": F.description, "h": format_poly(h), "count": n, "xy_zero": axes,
               "interval": wb.to_json() if wb else None}
    return _Result(payload, str(n), field=F)


# -- appendix -------------------------------------------------------------------


def cmd_appendix(args) -> _Result:
    fams = appendix_table(args.p)
    payload = {"p": args.p, "families": [f.to_json(args.p) for f in fams]}
    lines = []
    for f in fams:
        m = "any m" if f.m_residue is None else f"m = {f.m_residue} mod {args.p}"
        lines.append(f"{m}, k = {f.k_pattern()}: {f.render(args.p)}")
    ok = True
    if args.verify:
        checks = verify_appendix(args.p, args.nmax)
        ok = all(c.ok for c in checks)
        payload["verification"] = [{"k_pattern": c.family.k_pattern(), "m_residue": c.family.m_residue,
                                    "checked": c.checked, "skipped": c.skipped, "failures": c.failures}
                                   for c in checks]
        total = sum(c.checked for c in checks)
        lines.append(f"verified {total} instances (n, alpha, l <= {args.nmax}): "
                     + ("all DO and term-for-term equal" if ok else "FAILURES"))
    return _Result(payload, "\n".join(lines), ok=ok)


# -- plumbing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dodickson", description="DO polynomials from Dickson polynomials of the (m+1)-th kind")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, formats=("text", "json")):
        p.add_argument("--out", choices=formats, default="text")
        p.add_argument("--workers", type=int, default=None, help=f"worker processes (env {WORKERS_ENV})")

    p = sub.add_parser("dickson", help="print D_{k,m}(X^d, a)")
    p.add_argument("spec", nargs="?", help='e.g. "k=5,m=2,d=2,p=3,a=1"')
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--p", type=int)
    p.add_argument("--field")
    p.add_argument("--a")
    p.add_argument("--strip", action="store_true", help="drop the constant term")
    common(p)

    p = sub.add_parser("classify", help="DO sweep against the classification")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--kmax", type=int, default=40)
    p.add_argument("--dmax", type=int, default=200)
    p.add_argument("--m", default="all", help="'all' or comma list")
    p.add_argument("--all-rows", action="store_true", help="include non-DO rows in JSON")
    common(p, ("text", "json", "csv"))

    p = sub.add_parser("planar", help="planarity of a polynomial or family")
    p.add_argument("--field")
    p.add_argument("--poly")
    p.add_argument("--a")
    p.add_argument("--sweep-a", action="store_true")
    p.add_argument("--method", choices=("auto", "definition", "two-to-one"), default="auto")
    p.add_argument("--reproduce", choices=("thm63", "planar-list", "nonplanar", "monomial-law", "decomposition"))
    p.add_argument("--max-e", type=int, default=5)
    p.add_argument("--sample-e9", action="store_true")
    common(p)

    p = sub.add_parser("weil", help="Weil-bound utilities")
    wsub = p.add_subparsers(dest="weil_cmd", required=True)
    w = wsub.add_parser("min-e")
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--deg", type=int, required=True)
    w.add_argument("--boundary", type=int, required=True)
    common(w)
    w = wsub.add_parser("interval")
    w.add_argument("--q", type=int, required=True)
    w.add_argument("--deg", type=int, required=True)
    common(w)
    w = wsub.add_parser("count")
    w.add_argument("--field", required=True)
    w.add_argument("--h", required=True)
    w.add_argument("--a")
    common(w)

    p = sub.add_parser("appendix", help="table of all DO families")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--nmax", type=int, default=2)
    p.add_argument("--out", choices=("json", "text"), default="json")

    return ap


_HANDLERS = {"dickson": cmd_dickson, "classify": cmd_classify, "planar": cmd_planar,
             "weil": cmd_weil, "appendix": cmd_appendix}


def run_report(argv, args, res: _Result, elapsed: float) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "workers")}
    return {
        "schema": SCHEMA_VERSION,
        "version": __version__,
        "command": ["dodickson", *argv],
        "parameters": params,
        "field": res.field.description if res.field else None,
        "ok": res.ok,
        "results": res.payload,
        "timing_ms": round(1000 * elapsed),
    }


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    t0 = time.perf_counter()
    try:
        res = _HANDLERS[args.cmd](args)
    except (DoDicksonError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out = getattr(args, "out", "text")
    try:
        if out == "json":
            print(json.dumps(run_report(argv, args, res, time.perf_counter() - t0), indent=2, sort_keys=True, default=str))
        elif out == "csv" and res.csv is not None:
            sys.stdout.write(res.csv)
        else:
            print(res.text)
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. `| head`); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
    return EXIT_OK if res.ok else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
