"""Command line front end: compute, verify, chromatic, arrangement.

Exit status 0 when every check passes, 1 on a failed property or
cross-check, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Any, Callable

from . import __version__
from .arrangement import ArrangementComplex, compare
from .chromatic import GraphComparison, chromatic_cohomology, les_rank_check
from .cohomology import BigradedComplex, build_complex, cohomology_table, graded_euler
from .exactlin import RATIONAL, ComplexError
from .graph import chromatic_polynomial
from .poly import IntPoly, format_poly
from .quasirep import graphic_quasirep
from .io import (
    InputError,
    build_quasirep,
    dumps,
    parse_arrangement,
    parse_graph,
    parse_matroid,
    read_json,
    write_json,
    write_text_atomic,
)
from .report import Verdict
from . import verify as V

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def parse_ring(text: str) -> int | None:
    """None for Z, 0 for Q, p for Z/p."""
    t = text.lower()
    if t == "z":
        return None
    if t == "q":
        return RATIONAL
    if t.startswith("zp:"):
        try:
            p = int(t[3:])
        except ValueError:
            raise InputError(f"bad prime in ring {text!r}") from None
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise InputError(f"{p} is not a prime")
        return p
    raise InputError(f"unknown ring {text!r}; use z, q or zp:P")


def parse_jmax(text: str | None) -> int | None:
    if text is None or text == "auto":
        return None
    try:
        v = int(text)
    except ValueError:
        raise InputError(f"--jmax must be an integer or 'auto', got {text!r}") from None
    if v < 0:
        raise InputError("--jmax must be non-negative")
    return v


def _quasirep_arg(arg: str | None) -> Any:
    if arg is None:
        return None
    if arg.endswith(".json"):
        return read_json(arg)
    return arg


def _load_input(args) -> Any:
    if not args.input:
        raise InputError("--input is required")
    return read_json(args.input)


def field_dims(c: BigradedComplex, p: int) -> dict:
    cells = [{"i": i, "j": j, "dim": c.rank_over(i, j, p)} for i in range(c.n + 1) for j in range(c.j_max + 1)]
    return {"ring": "Q" if p == RATIONAL else f"Z/{p}", "cells": cells}


def render_dims(obj: dict, n: int, j_max: int) -> str:
    dims = {(c["i"], c["j"]): c["dim"] for c in obj["cells"]}
    rows = [["i\\j"] + [str(j) for j in range(j_max + 1)]]
    for i in range(n + 1):
        rows.append([str(i)] + [str(dims[(i, j)]) for j in range(j_max + 1)])
    widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
    return "\n".join("  ".join(x.rjust(w) for x, w in zip(r, widths)) for r in rows)


def _write_outputs(out: str | None, obj: dict, text: str) -> None:
    if out:
        write_json(out, obj)
        write_text_atomic(out + ".txt", text + "\n")


# -- subcommands


def run_compute(args) -> int:
    mi = parse_matroid(_load_input(args))
    q = build_quasirep(mi, _quasirep_arg(args.quasirep))
    ring = parse_ring(args.ring)
    c = build_complex(q, parse_jmax(args.jmax))
    full = q.matroid.char_poly().shift_one()
    want = IntPoly(full.coeffs[: c.j_max + 1])
    if ring is None:
        try:
            t = cohomology_table(c)
        except ComplexError as exc:
            print(f"FAIL d o d = 0: {exc}", file=sys.stderr)
            return EXIT_FAIL
        text = t.render()
        obj = t.to_json()
        euler = t.euler
        ok = t.euler == want and t.cohomology_euler() == want
    else:
        obj = field_dims(c, ring)
        text = render_dims(obj, c.n, c.j_max)
        euler = graded_euler(c)
        ok = euler == want
    print(text)
    if ring is not None:
        print("euler:", format_poly(euler.coeffs, "q"))
    verdict = "pass" if ok else "FAIL"
    print(f"char poly at 1+q: {format_poly(want.coeffs, 'q')}  cross-check: {verdict}")
    _write_outputs(args.out, obj, text)
    return EXIT_OK if ok else EXIT_FAIL


def run_chromatic(args) -> int:
    g = parse_graph(_load_input(args))
    t = chromatic_cohomology(g)
    want = chromatic_polynomial(g).shift_one()
    text = t.render()
    print(text)
    ok = t.euler == want and t.cohomology_euler() == want
    print(f"P(G; 1+q): {format_poly(want.coeffs, 'q')}  cross-check: {'pass' if ok else 'FAIL'}")
    _write_outputs(args.out, t.to_json(), text)
    return EXIT_OK if ok else EXIT_FAIL


def run_arrangement(args) -> int:
    a = parse_arrangement(_load_input(args))
    ac = ArrangementComplex(a)
    cells = [{"i": i, "j": j, "dim": d} for (i, j), d in sorted(ac.table().items())]
    obj = {"ring": "Q", "cells": cells}
    text = render_dims(obj, ac.n, ac.j_max)
    print(text)
    v = compare(a)
    print(f"matroid comparison: {'pass' if v.passed else 'FAIL'}")
    obj["comparison"] = v.to_json()
    _write_outputs(args.out, obj, text)
    return EXIT_OK if v.passed else EXIT_FAIL


# -- verification suites


def _input_quasirep(args):
    mi = parse_matroid(_load_input(args))
    return build_quasirep(mi, _quasirep_arg(args.quasirep))


def _suite_euler(args, rng) -> list[Verdict]:
    if args.input:
        return [V.verify_euler(_input_quasirep(args))]
    out = []
    for k in range(args.count):
        g = V.random_graph(rng, 5)
        t = chromatic_cohomology(g)
        want = chromatic_polynomial(g).shift_one()
        ok = t.euler == want and t.cohomology_euler() == want
        out.append(Verdict.ok(f"chromatic Euler #{k}") if ok else Verdict.fail(f"chromatic Euler #{k}", g.to_json()))
        out.append(V.verify_euler(graphic_quasirep(g)))
    return out


def _suite_ses(args, rng) -> list[Verdict]:
    q = _input_quasirep(args)
    return [V.verify_ses(q, e) for e in range(1, q.n + 1) if not q.matroid.is_coloop(e)]


def _suite_les(args, rng) -> list[Verdict]:
    q = _input_quasirep(args)
    return [V.verify_les_ranks(q, e) for e in range(1, q.n + 1) if not q.matroid.is_coloop(e)]


def _suite_coloop(args, rng) -> list[Verdict]:
    q = _input_quasirep(args)
    return [V.verify_coloop(q, e) for e in q.matroid.coloops()]


def _suite_identities(args, rng) -> list[Verdict]:
    return [V.verify_identities(_input_quasirep(args))]


def _suite_uct(args, rng) -> list[Verdict]:
    q = _input_quasirep(args)
    c = build_complex(q)
    return [V.uct_check(c, cohomology_table(c))]


def _suite_chromatic(args, rng) -> list[Verdict]:
    g = parse_graph(_load_input(args))
    cmp = GraphComparison(g)
    out = []
    for p, ring in ((0, "Z"), (2, "Z/2")):
        bad = cmp.theta_chain_defect(p)
        out.append(Verdict.ok(f"theta chain map over {ring}") if bad is None else Verdict.fail(f"theta chain map over {ring}", bad))
        bad = cmp.tau_chain_defect(p)
        out.append(Verdict.ok(f"tau chain map over {ring}") if bad is None else Verdict.fail(f"tau chain map over {ring}", bad))
    bad = cmp.ses_defect()
    out.append(Verdict.ok("chromatic SES exact") if bad is None else Verdict.fail("chromatic SES exact", bad))
    if g.is_connected():
        out.append(les_rank_check(g))
    return out


def _suite_arrangement(args, rng) -> list[Verdict]:
    return [compare(parse_arrangement(_load_input(args)))]


SUITES: dict[str, Callable] = {
    "euler": _suite_euler,
    "ses": _suite_ses,
    "les": _suite_les,
    "coloop": _suite_coloop,
    "identities": _suite_identities,
    "uct": _suite_uct,
    "chromatic": _suite_chromatic,
    "arrangement": _suite_arrangement,
}


def run_verify(args) -> int:
    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}")
    rng = random.Random(args.seed)
    try:
        verdicts = SUITES[args.suite](args, rng)
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc
    flat = [x for v in verdicts for x in v.flatten()]
    report = [v.to_json() for v in flat]
    for v in flat:
        status = "pass" if v.passed else ("skip" if v.kind == "skipped" else "FAIL")
        print(f"{status}  {v.property}" + (f"  {v.detail}" if v.detail and not v.passed else ""))
    if args.out:
        write_json(args.out, report)
    bad = next((v for v in flat if not v.passed), None)
    if bad is not None:
        print(f"first failure: {bad.property}; witness {dumps(bad.to_json()['witness']).strip()}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="matcoh", description="Integral characteristic cohomology of matroids.")
    ap.add_argument("--version", action="version", version=f"matcoh {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, quasirep=True):
        p.add_argument("--input", metavar="PATH", help="input JSON description")
        p.add_argument("--out", metavar="PATH", help="output JSON path (a .txt rendering is written next to it)")
        p.add_argument("--seed", type=int, default=0)
        if quasirep:
            p.add_argument("--quasirep", metavar="NAME|PATH", help="canonical, free_default, graphic, u22_diagonal or a JSON file")
            p.add_argument("--ring", default="z", help="z, q or zp:P")
            p.add_argument("--jmax", default="auto", help="largest exterior degree, or auto")

    common(sub.add_parser("compute", help="cohomology table of a matroid with a quasi-representation"))
    p = sub.add_parser("verify", help="run a verification suite")
    common(p)
    p.add_argument("--suite", required=True, help=", ".join(sorted(SUITES)))
    p.add_argument("--count", type=int, default=100, help="random instances for the euler suite")
    common(sub.add_parser("chromatic", help="chromatic cohomology of a graph"), quasirep=False)
    common(sub.add_parser("arrangement", help="arrangement complex over Q and its matroid comparison"), quasirep=False)
    return ap


COMMANDS = {"compute": run_compute, "verify": run_verify, "chromatic": run_chromatic, "arrangement": run_arrangement}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
