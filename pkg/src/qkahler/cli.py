"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 residue degeneracy.
"""
from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

from . import __version__
from .comb import golden_recursion, phi_map
from .exact import format_fraction
from .gw import FormulaBook, PersistentCache, StructureEngine, virtual_constants
from .mirror import QSeries, hypergeom_check, invert_map, mirror_map, mirror_transform
from .oracles import reference_integrands
from .polyd import golden_poly, poly_d
from .qring import MultiplicationTable, relation_check
from .residue import DegenerateResidue, iterated_residue

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3

HEADLINE = (8, 7, 6, 0, Fraction(13799153353276807722049582771200))
SUITES = ("poly-tables", "appendix-a", "residues", "biglnumber", "hypergeom", "ring")


class UsageError(Exception):
    pass


class Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        if args.cache:
            self.cache = PersistentCache(Path(args.cache))
        else:
            self.cache = PersistentCache.default()
        self.formulas = FormulaBook(self.cache, jobs=args.jobs)
        self._engines: Dict[str, StructureEngine] = {}

    def engine(self, mode: str) -> StructureEngine:
        if mode not in self._engines:
            self._engines[mode] = StructureEngine(mode, self.formulas, self.cache)
        return self._engines[mode]

    def close(self) -> None:
        if self.cache is not None:
            self.cache.save()


def _emit(args, payload, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _require(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


# commands


def cmd_poly(ctx: Context) -> int:
    a = ctx.args
    _require(a, "degree")
    if a.degree < 1:
        raise UsageError("--degree must be at least 1")
    p = ctx.formulas.poly(a.degree)
    _emit(a, p.to_json(), p.render(multiline=a.degree >= 5))
    return EXIT_OK


def cmd_recursion(ctx: Context) -> int:
    a = ctx.args
    _require(a, "degree")
    if a.degree < 1:
        raise UsageError("--degree must be at least 1")
    f = ctx.formulas[a.degree]
    text = f.render()
    if f.conjectural:
        text += "\n# conjectural: no independent reference for this degree"
    _emit(a, f.to_json(), text)
    return EXIT_OK


def cmd_compute(ctx: Context) -> int:
    a = ctx.args
    _require(a, "N", "k", "d", "n")
    if a.k < 2 or a.d < 1 or a.N < a.k:
        raise UsageError("need k >= 2, d >= 1 and N >= k")
    mode = a.mode
    if a.N == a.k and mode == "fano":
        mode = "virtual"
    v = ctx.engine(mode).compute(a.N, a.k, a.d, a.n)
    _emit(a, {"mode": mode, "N": a.N, "k": a.k, "d": a.d, "n": a.n, "value": format_fraction(v)}, str(v))
    return EXIT_OK


def cmd_table(ctx: Context) -> int:
    a = ctx.args
    _require(a, "N", "k", "dmax")
    if a.k < 2 or a.N <= a.k or a.dmax < 1:
        raise UsageError("need k >= 2, N > k and --dmax >= 1")
    t = MultiplicationTable.build(a.N, a.k, a.dmax, ctx.engine("fano"))
    _emit(a, t.to_json(), t.render())
    return EXIT_OK


def cmd_virtual(ctx: Context) -> int:
    a = ctx.args
    _require(a, "k", "dmax")
    if a.k < 3 or a.dmax < 1:
        raise UsageError("need k >= 3 and --dmax >= 1")
    vals = virtual_constants(a.k, a.dmax, ctx.engine("virtual"))
    rows = [{"d": d, "n": n, "value": format_fraction(v)} for (d, n), v in sorted(vals.items())]
    width = max(len(str(v)) for v in vals.values())
    lines = [f"d={d:<3d} " + "  ".join(f"{str(vals[(d, n)]):>{width}}" for n in range(a.k)) for d in range(1, a.dmax + 1)]
    _emit(a, {"k": a.k, "dmax": a.dmax, "rows": rows}, "\n".join(lines))
    return EXIT_OK


def cmd_mirror(ctx: Context) -> int:
    a = ctx.args
    _require(a, "k", "dmax")
    if a.k < 3 or a.dmax < 0:
        raise UsageError("need k >= 3 and --dmax >= 0")
    eng = ctx.engine("virtual")
    R = mirror_map(a.k, a.dmax, eng)
    S = invert_map(R)
    transforms = {m: mirror_transform(a.k, m, a.dmax, eng) for m in range(2, a.k - 2)}
    payload = {
        "k": a.k,
        "dmax": a.dmax,
        "t_minus_x": R.to_json(),
        "x_minus_t": S.to_json(),
        "transforms": {str(m): s.to_json() for m, s in transforms.items()},
    }

    def show(s: QSeries) -> str:
        return ", ".join(str(c) for c in s.coeffs)

    lines = [f"t(x) - x : {show(R)}", f"x(t) - t : {show(S)}"]
    lines += [f"L_{m}(e^t)  : {show(s)}" for m, s in transforms.items()]
    _emit(a, payload, "\n".join(lines))
    return EXIT_OK


# verification suites; each returns a list of (label, ok, detail)

Check = List[tuple]


def _suite_poly_tables(ctx: Context) -> Check:
    out = []
    for d in (1, 2, 3, 4, 6):
        ok = poly_d(d, jobs=ctx.args.jobs) == golden_poly(d)
        out.append((f"poly degree {d}", ok, ""))
    return out


def _suite_appendix_a(ctx: Context) -> Check:
    out = []
    for d in range(1, 6):
        mine, ref = phi_map(ctx.formulas.poly(d)), golden_recursion(d)
        out.append((f"recursion degree {d}", mine.as_dict() == ref.as_dict(), f"{len(mine.terms)} terms"))
    return out


def _suite_residues(ctx: Context) -> Check:
    out = []
    for label, (e, want) in reference_integrands().items():
        idx = sorted(e.t_indices())
        got = {iterated_residue(e, list(p)) for p in itertools.permutations(idx)}
        out.append((label, got == {want}, f"got {sorted(got)} want {want}"))
    return out


def _suite_biglnumber(ctx: Context) -> Check:
    N, k, d, n, want = HEADLINE
    got = ctx.engine("fano").compute(N, k, d, n)
    return [(f"L_{n}^{{{N},{k},{d}}}", got == want, f"got {got}")]


def _suite_hypergeom(ctx: Context) -> Check:
    a = ctx.args
    kmax = a.k if a.k is not None else 10
    dmax = a.dmax if a.dmax is not None else 6
    out = []
    eng = ctx.engine("virtual")
    for k in range(3, kmax + 1):
        for row in hypergeom_check(k, dmax, eng):
            out.append((f"k={k} d={row['d']}", row["a_ok"] and row["b_ok"], f"lhs {row['lhs']} rhs {row['rhs']}"))
    return out


def _suite_ring(ctx: Context) -> Check:
    out = []
    eng = ctx.engine("fano")
    for k in range(2, 7):
        for N in range(k + 1, 2 * k + 3):
            ok, res = relation_check(N, k, engine=eng)
            out.append((f"N={N} k={k}", ok, "" if ok else f"residual {res.to_json()['terms']}"))
    return out


_SUITES: Dict[str, Callable[[Context], Check]] = {
    "poly-tables": _suite_poly_tables,
    "appendix-a": _suite_appendix_a,
    "residues": _suite_residues,
    "biglnumber": _suite_biglnumber,
    "hypergeom": _suite_hypergeom,
    "ring": _suite_ring,
}


def cmd_verify(ctx: Context) -> int:
    a = ctx.args
    checks = _SUITES[a.suite](ctx)
    failed = [c for c in checks if not c[1]]
    payload = {
        "suite": a.suite,
        "ok": not failed,
        "checks": [{"label": l, "ok": ok, "detail": det} for l, ok, det in checks],
    }
    lines = [f"{'ok  ' if ok else 'FAIL'} {l}" + (f"  ({det})" if det and not ok else "") for l, ok, det in checks]
    lines.append(f"{a.suite}: {len(checks) - len(failed)}/{len(checks)} passed")
    _emit(a, payload, "\n".join(lines))
    if failed:
        print(f"first mismatch: {failed[0][0]} {failed[0][2]}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


COMMANDS = {
    "poly": cmd_poly,
    "recursion": cmd_recursion,
    "compute": cmd_compute,
    "table": cmd_table,
    "virtual": cmd_virtual,
    "mirror": cmd_mirror,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--cache", help="cache file (default: $QKAHLER_CACHE/qkahler-cache.json if set)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for Poly_d construction")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="qkahler", description="Exact structure constants of Fano and Calabi-Yau hypersurfaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("poly", "recursion"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--degree", type=int)

    s = sub.add_parser("compute", parents=[common])
    for flag in ("--N", "--k", "--d", "--n"):
        s.add_argument(flag, type=int)
    s.add_argument("--mode", choices=("fano", "virtual"), default="fano")

    s = sub.add_parser("table", parents=[common])
    for flag in ("--N", "--k", "--dmax"):
        s.add_argument(flag, type=int)

    for name in ("virtual", "mirror"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--k", type=int)
        s.add_argument("--dmax", type=int)

    s = sub.add_parser("verify", parents=[common])
    s.add_argument("suite", choices=SUITES)
    s.add_argument("--k", type=int, help="largest k for the hypergeom suite (default 10)")
    s.add_argument("--dmax", type=int, help="largest degree for the hypergeom suite (default 6)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    ctx = Context(args)
    try:
        return COMMANDS[args.command](ctx)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qkahler: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateResidue as exc:
        print(f"qkahler: degenerate residue: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"qkahler: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        ctx.close()


if __name__ == "__main__":
    sys.exit(main())
