"""Command-line front end.

Exit codes: 0 success, 1 a check or comparison failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .document import DocumentError, WorkspaceDocument, load_document
from .gradedalg import CapExceededError
from .gradedmod import ModuleError
from .homology import ext_table, extract_pattern, tate_tables, tor_table
from .polyparse import ParseError, parse
from .resolve import ResourceLimitError, StructureError, minimal_free_resolution, series_expand
from .scalar import QQ, FieldError, field_from_spec, order_of_unit

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _doc(args) -> WorkspaceDocument:
    fld = None
    if getattr(args, "field", None):
        try:
            fld = field_from_spec(args.field)
        except FieldError as exc:
            raise InputError(f"--field: {exc}") from exc
    return load_document(args.file, field=fld, alpha=getattr(args, "alpha", None))


def _default(doc: WorkspaceDocument, key: str, value, fallback):
    if value is not None:
        return value
    return doc.raw.get("defaults", {}).get(key, fallback)


def _left(doc: WorkspaceDocument, name: str):
    """A module, or a complex family used as the resolution of the module it resolves."""
    if name in doc.raw.get("families", {}) and "complex" in doc.raw["families"][name]:
        return doc.family(name)
    return doc.module(name)


def _bool(b: bool) -> str:
    return "true" if b else "false"


# ---------------------------------------------------------------------------
# subcommands


def cmd_algebra(args, out) -> int:
    doc = _doc(args)
    alg = doc.algebra
    if args.action == "info":
        out.write(f"dim={alg.dim} hilbert={','.join(map(str, alg.hilbert))} "
                  f"gorenstein={_bool(alg.is_gorenstein_artinian())}\n")
        out.write(f"socle={','.join(map(str, alg.socle_dims()))}\n")
    elif args.action == "basis":
        names = alg.basis_names()
        for d in range(len(alg.hilbert)):
            mons = [names[t] for t in range(alg.dim) if alg.degree_of[t] == d]
            out.write(f"{d}: {' '.join(mons)}\n")
    elif args.action == "modules":
        for name in doc.module_names():
            m = doc.module(name)
            hs = ",".join(f"{d}:{n}" for d, n in m.hilbert().items())
            out.write(f"{name}: dim={m.dim} hilbert={hs or '0'}\n")
    return EXIT_OK


def _parse_series(text: str) -> tuple[list, list]:
    try:
        num_s, den_s = text.split(",", 1)
    except ValueError as exc:
        raise InputError("--series expects NUM,DEN, polynomials in t such as 1,1-4*t+t^2") from exc
    coeffs = []
    for s in (num_s, den_s):
        try:
            p = parse(s, ["t"], QQ)
        except ParseError as exc:
            raise InputError(f"--series: {exc}") from exc
        deg = max((m[0] for m in p.terms), default=0)
        c = [0] * (deg + 1)
        for m, v in p.terms.items():
            c[m[0]] = int(v) if v == int(v) else v
        coeffs.append(c)
    return coeffs[0], coeffs[1]


def cmd_resolve(args, out) -> int:
    doc = _doc(args)
    N = doc.module(args.module)
    H = _default(doc, "steps", args.steps, 20)
    series = _parse_series(args.series) if args.series else None
    res = minimal_free_resolution(N, H, keep_differentials=False, keep_last=False)
    bt = res.betti
    out.write(bt.to_csv())
    lows = [min(bt.internal_degrees(i)) - i for i in range(H + 1) if bt.internal_degrees(i)]
    p = min(lows) if lows else 0
    out.write(f"# linear={_bool(bt.is_linear(p))} p={p}\n")
    if series is None:
        return EXIT_OK
    want = series_expand(series[0], series[1], H)
    got = bt.totals()
    ok = list(want) == list(got)
    out.write(f"# series={'match' if ok else 'mismatch'} expected={','.join(map(str, want))}\n")
    return EXIT_OK if ok else EXIT_FAIL


def _homology(args, out, fn) -> int:
    doc = _doc(args)
    M = _left(doc, args.M)
    N = doc.module(args.N)
    H = _default(doc, "steps", args.steps, 15)
    t = fn(M, N, H, bigraded=args.bigraded)
    out.write(t.to_csv(bigraded=args.bigraded))
    return EXIT_OK


def cmd_ext(args, out) -> int:
    return _homology(args, out, ext_table)


def cmd_tor(args, out) -> int:
    return _homology(args, out, tor_table)


def cmd_tate(args, out) -> int:
    doc = _doc(args)
    fam = doc.family(args.family)
    N = doc.module(args.N)
    W = _default(doc, "window", args.window, 8)
    tt, te = tate_tables(fam, N, W)
    if args.kind == "tor":
        out.write(tt.to_csv())
    elif args.kind == "ext":
        out.write(te.to_csv())
    else:
        out.write("i,tor,ext\n")
        for i in range(-W, W + 1):
            out.write(f"{i},{tt[i]},{te[i]}\n")
    return EXIT_OK


def _qrange(text: str) -> range:
    try:
        a, b = text.split("..")
        return range(int(a), int(b) + 1)
    except ValueError as exc:
        raise InputError(f"--q-range expects a..b, got {text!r}") from exc


def cmd_scan(args, out) -> int:
    doc = _doc(args)
    fams = doc.raw.get("families", {})
    fam_name = args.family
    if fam_name not in fams and fam_name.endswith("q") and fam_name[:-1] in fams:
        fam_name = fam_name[:-1]   # accept "Tq" for the family "T"
    if fam_name not in fams or "cyclic" not in fams[fam_name]:
        raise DocumentError("/families", f"no module family named {args.family!r}")
    M = _left(doc, args.M)
    H = _default(doc, "steps", args.steps, 15)
    alg = doc.algebra
    s = order_of_unit(alg.alpha, alg.field) if alg.alpha is not None else 0
    fn = ext_table if args.functor == "ext" else tor_table
    lo = 0 if args.functor == "ext" else 1
    for q in _qrange(args.q_range):
        t = fn(M, doc.module(f"{fam_name}{q}"), H)
        out.write(f"q={q}: {extract_pattern(t, s, lo, H).summary()}\n")
    return EXIT_OK


def cmd_reproduce(args, out) -> int:
    from .paperlab import build_scenario, load_scenario, reproduce_all
    if args.scenario:
        sc = load_scenario(args.scenario, args.steps, args.window)
    else:
        try:
            fld = field_from_spec(args.field)
        except FieldError as exc:
            raise InputError(f"--field: {exc}") from exc
        sc = build_scenario(fld, args.alpha, args.steps or 15, args.window or 8)
    depths = {}
    for item in args.betti_depth or []:
        try:
            k, v = item.split("=")
            depths[k] = int(v)
        except ValueError as exc:
            raise InputError(f"--betti-depth expects name=int, got {item!r}") from exc
    bf = field_from_spec(args.betti_field) if args.betti_field else None
    rep = reproduce_all(sc, betti_depths=depths, betti_field=bf)
    for line in rep.lines():
        out.write(line + "\n")
    out.write(f"{len(rep.checks) - len(rep.failures())}/{len(rep.checks)} checks passed\n")
    if args.out:
        Path(args.out).write_text(rep.to_json(timing=args.timing))
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gorhom", description="Graded algebra, resolutions and (co)homology tables.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--file", default="A.json",
                       help="workspace document (a bundled name such as A.json or B.json also works)")
        p.add_argument("--field", help="override the field: Q or Fp such as F5")
        p.add_argument("--alpha", help="override the value substituted for a")

    p = sub.add_parser("algebra", help="facts about the algebra")
    common(p)
    p.add_argument("action", choices=["info", "basis", "modules"], nargs="?", default="info")
    p.set_defaults(fn=cmd_algebra)

    p = sub.add_parser("resolve", help="Betti table of a module")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--steps", type=int)
    p.add_argument("--series", help="compare total Betti numbers with NUM/DEN, e.g. 1,1-4*t+t^2")
    p.set_defaults(fn=cmd_resolve)

    for name, fn in (("ext", cmd_ext), ("tor", cmd_tor)):
        p = sub.add_parser(name, help=f"{name.capitalize()} dimension table")
        common(p)
        p.add_argument("--M", required=True, help="left module, or a complex family such as C")
        p.add_argument("--N", required=True)
        p.add_argument("--steps", type=int)
        p.add_argument("--bigraded", action="store_true")
        p.set_defaults(fn=fn)

    p = sub.add_parser("tate", help="Tate Tor and Ext on [-W, W] from a complex family")
    common(p)
    p.add_argument("--N", required=True)
    p.add_argument("--family", default="C")
    p.add_argument("--window", type=int)
    p.add_argument("--kind", choices=["tor", "ext", "both"], default="both")
    p.set_defaults(fn=cmd_tate)

    p = sub.add_parser("scan", help="vanishing patterns along a module family")
    common(p)
    p.add_argument("--family", default="T")
    p.add_argument("--q-range", required=True, help="a..b")
    p.add_argument("--M", default="C")
    p.add_argument("--functor", choices=["ext", "tor"], default="ext")
    p.add_argument("--steps", type=int)
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("reproduce", help="run the reproduction suite")
    p.add_argument("--field", default="Q")
    p.add_argument("--alpha", default="2")
    p.add_argument("--steps", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--scenario", help="scenario file such as scenario_F5_2.json")
    p.add_argument("--betti-depth", action="append", metavar="NAME=N",
                   help="Betti depth override (kA, kB, T, V); repeatable")
    p.add_argument("--betti-field", help="run the Betti checks over this field instead")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--timing", action="store_true", help="include timings in the JSON report")
    p.set_defaults(fn=cmd_reproduce)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.fn(args, out)
    except (DocumentError, InputError, ParseError, FieldError, ModuleError, CapExceededError) as exc:
        sys.stderr.write(f"gorhom: error: {exc}\n")
        return EXIT_INPUT
    except ResourceLimitError as exc:
        sys.stderr.write(f"gorhom: error: {exc}; lower --steps or raise the budget\n")
        return EXIT_INPUT
    except StructureError as exc:
        sys.stderr.write(f"gorhom: check failed: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
