"""Command line driver: ``specp run | grid | witt | oracle``.

Exit codes: 0 everything matched (or matched a known erratum), 2 a new
mismatch, 3 an uncertified square, 4 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import families
from .hall import enumerate_basic, rank_crosscheck, witt_chi
from .oracle import lattices_equal, oracle_square
from .pcgroup import PresentationError
from .presentation_io import load_presentation
from .report import SECTIONS, emit_json, emit_markdown, exit_status, run, run_grid
from .wedge import MODES, square

EXIT_OK, EXIT_MISMATCH, EXIT_UNCERTIFIED, EXIT_USAGE = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="specp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="invariants of one group")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", choices=sorted(families.FAMILIES))
    src.add_argument("--input", help="presentation file")
    r.add_argument("-d", type=int, default=3)
    r.add_argument("-p", type=int, default=3)
    r.add_argument("-t", type=int, default=0, help="power rank for rank-full / rank-deficient families")
    r.add_argument("--what", default=",".join(SECTIONS), help=f"comma list from {','.join(SECTIONS)}")
    r.add_argument("--all", action="store_true", help="all sections (default)")
    r.add_argument("--format", choices=("json", "markdown"), default="json")
    r.add_argument("--budget", type=int, default=None, help="cap on enumerated relation instances")
    r.add_argument("--tiers", default="T1,T2,T3", help="relation tiers to use, in order")

    g = sub.add_parser("grid", help="sweep families over p, d, t")
    g.add_argument("--primes", default="3")
    g.add_argument("--ds", default="3")
    g.add_argument("--ts", default="0")
    g.add_argument("--families", default="free-special")
    g.add_argument("--what", default=",".join(SECTIONS))
    g.add_argument("--format", choices=("json", "markdown"), default="json")

    w = sub.add_parser("witt", help="Witt numbers and the basic commutators")
    w.add_argument("-n", type=int, required=True)
    w.add_argument("-d", type=int, required=True)
    w.add_argument("--list", action="store_true", help="print the ordered basis up to weight n")

    o = sub.add_parser("oracle", help="compare the symbolic squares with the table oracle")
    o.add_argument("--max-order", type=int, default=81)
    o.add_argument("-p", type=int, default=3)
    return ap


def _cmd_run(args) -> int:
    what = SECTIONS if args.all else tuple(s for s in args.what.split(",") if s)
    kw = {"tiers": tuple(s for s in args.tiers.split(",") if s)}
    if args.budget is not None:
        kw["budget"] = args.budget
    if args.input:
        P = load_presentation(args.input, label=args.input)
        rep = run(P, what, source=args.input, **kw)
    else:
        P = families.build_family(args.family, args.d, args.p, args.t)
        rep = run(P, what, **kw)
    sys.stdout.write(emit_json(rep) if args.format == "json" else emit_markdown(rep))
    return exit_status(rep)


def _cmd_grid(args) -> int:
    res = run_grid(_ints(args.primes), _ints(args.ds), _ints(args.ts),
                   [f for f in args.families.split(",") if f], tuple(s for s in args.what.split(",") if s))
    sys.stdout.write(emit_json(res) if args.format == "json" else emit_markdown(res))
    return exit_status(res)


def _cmd_witt(args) -> int:
    if args.n < 1 or args.d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    out = {"n": args.n, "d": args.d, "chi": witt_chi(args.n, args.d)}
    if args.list:
        basis = enumerate_basic(args.d, args.n)
        out["basis"] = [{"weight": b.weight, "commutator": b.render(basis)} for b in basis]
        counts: dict[int, int] = {}
        for b in basis:
            counts[b.weight] = counts.get(b.weight, 0) + 1
        out["counts"] = counts
    if args.d >= 2:
        out["rank_crosscheck"] = rank_crosscheck(args.d).to_json()
    print(json.dumps(out, indent=2))
    return EXIT_OK


def oracle_suite(p: int, max_order: int):
    """Small groups for the oracle comparison, up to ``max_order``."""
    groups = [
        families.abelian(p, [1]),
        families.abelian(p, [1, 1]),
        families.abelian(p, [2, 1]),
        families.extraspecial(p),
        families.extraspecial(p, p * p),
        families.extraspecial(p, p, p**4),
        families.extraspecial(p, p * p, p**4),
    ]
    return [G for G in groups if G.order <= max_order]


def _cmd_oracle(args) -> int:
    rows, bad = [], 0
    for P in oracle_suite(args.p, args.max_order):
        for mode in MODES:
            O = oracle_square(P, mode)
            S = square(P, mode)
            same = (
                S.certified
                and str(O.structure) == str(S.structure)
                and str(O.kernel_structure()) == str(S.kernel_structure())
                and lattices_equal(O.group, S.group)
            )
            bad += not same
            rows.append({"group": P.label, "mode": mode, "oracle": str(O.structure),
                         "symbolic": str(S.structure), "kernel": str(O.kernel_structure()), "agree": same})
    print(json.dumps({"comparisons": rows, "disagreements": bad}, indent=2))
    return EXIT_MISMATCH if bad else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "grid": _cmd_grid, "witt": _cmd_witt, "oracle": _cmd_oracle}
    try:
        return handlers[args.cmd](args)
    except (PresentationError, ValueError, OSError) as exc:
        print(f"specp: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
