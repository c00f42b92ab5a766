"""Command-line interface.

Usage::

    oagwlp check  design.txt
    oagwlp gwlp   design.txt
    oagwlp wmatrix design.txt --order 3
    oagwlp rank1  design.txt
    oagwlp remove design.txt --p 2 --format json --threads 4
    oagwlp greedy design.txt --p 2 --first 1

Data goes to stdout (or ``--output``); diagnostics go to stderr.
Exit codes: 0 success, 1 usage, 2 input/parse error, 3 capacity refusal.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import sys
from pathlib import Path

from . import __version__
from ._backend import BACKEND
from .core import Fraction, GwlpExact
from .counting import strength
from .errors import CapacityError, OagwlpError, ParseError
from .oafile import read_oa_file
from .removal import DEFAULT_MAX_SUBSETS, DEFAULT_REPRESENTATIVES, exhaustive_search, greedy_sequential, rank_single_removals
from .report import ReportDocument, emit_report, format_ratio, round_half_up
from .wstack import build_wstack, gwlp_from_wstack, w_marginal

logger = logging.getLogger("oagwlp")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAPACITY = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def oa_class(fraction: Fraction, t: int) -> str:
    return f"OA({fraction.n}, {fraction.space.describe()}, t={t})"


def format_sig(value, digits: int = 4) -> str:
    return format(float(value), f".{digits}g")


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _aligned(rows) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


def _gwlp_json(g: GwlpExact) -> dict:
    return {"gwlp_num": list(g.numerators), "gwlp_den": g.denominator}


def cmd_check(args, fraction):
    t = strength(fraction)
    codes = fraction.codes
    dists = [int((codes[a] != codes[b]).sum()) for a, b in itertools.combinations(range(fraction.n), 2)]
    dmin, dmax = (min(dists), max(dists)) if dists else (0, 0)
    if args.format == "json":
        return json.dumps(
            {
                "input": args.file,
                "n": fraction.n,
                "m": fraction.m,
                "levels": list(fraction.space.levels),
                "strength": t,
                "class": oa_class(fraction, t),
                "hamming_min": dmin,
                "hamming_max": dmax,
            },
            indent=2,
        ) + "\n"
    if args.format == "csv":
        return _csv([["class", "n", "m", "strength", "hamming_min", "hamming_max"], [oa_class(fraction, t), fraction.n, fraction.m, t, dmin, dmax]])
    return f"{oa_class(fraction, t)}\nstrength: {t}\npairwise Hamming distance: {dmin}..{dmax}\n"


def cmd_gwlp(args, fraction):
    g = gwlp_from_wstack(build_wstack(fraction))
    if args.format == "json":
        return json.dumps({"input": args.file, "n": fraction.n, **_gwlp_json(g)}, indent=2) + "\n"
    if args.format == "csv":
        return _csv([["j", "A_j", "numerator", "denominator", "rounded"]] + [[j, format_ratio(v), g.numerators[j], g.denominator, round_half_up(v)] for j, v in enumerate(g.values)])
    rounded = "(" + ", ".join(format_sig(v) for v in g.values) + ")"
    exact = "(" + ", ".join(format_ratio(v) for v in g.values) + ")"
    return f"{rounded}\nexact: {exact}\n"


def cmd_wmatrix(args, fraction):
    w = build_wstack(fraction)
    j = args.order
    if not 0 <= j <= w.m:
        raise _UsageError(f"--order must lie in 0..{w.m}")
    mat = w[j].tolist()
    marg = [w_marginal(w, j, f) for f in range(1, w.n + 1)]
    if args.format == "json":
        return json.dumps({"input": args.file, "order": j, "matrix": mat, "marginals": marg}) + "\n"
    header = [f"f_{i}" for i in range(1, w.n + 1)] + [f"w_{j},f"]
    rows = [header] + [[str(v) for v in row] + [str(mk)] for row, mk in zip(mat, marg)]
    if args.format == "csv":
        return _csv(rows)
    return _aligned(rows)


def _gwlp_columns(g: GwlpExact):
    return [round_half_up(v) for v in g.values[1:]]


def cmd_rank1(args, fraction):
    w = build_wstack(fraction)
    ranked = rank_single_removals(w)
    if args.format == "json":
        return json.dumps({"input": args.file, "removals": [{"run": f, **_gwlp_json(g)} for f, g in ranked]}, indent=2) + "\n"
    header = ["rank", "run"] + [f"A_{j}" for j in range(1, w.m + 1)]
    rows = [header] + [[str(r), f"f_{f}"] + _gwlp_columns(g) for r, (f, g) in enumerate(ranked, 1)]
    return _csv(rows) if args.format == "csv" else _aligned(rows)


def cmd_remove(args, fraction):
    w = build_wstack(fraction)
    report = exhaustive_search(
        w,
        args.p,
        max_subsets=args.max_subsets,
        representatives=args.reps,
        threads=args.threads,
        force=args.force,
    )
    doc = ReportDocument.from_removal(report, Path(args.file).name)
    return emit_report(doc, args.format).decode("utf-8")


def cmd_greedy(args, fraction):
    w = build_wstack(fraction)
    res = greedy_sequential(w, args.p, first=args.first)
    if args.format == "json":
        steps = [
            {"step": k, "removed": f, "tied": list(t), **_gwlp_json(g)}
            for k, (f, g, t) in enumerate(zip(res.removed, res.steps, res.ties), 1)
        ]
        return json.dumps({"input": args.file, "p": args.p, "first": args.first, "steps": steps}, indent=2) + "\n"
    header = ["step", "removed", "best"] + [f"A_{j}" for j in range(1, w.m + 1)]
    rows = [header] + [
        [str(k), f"f_{f}", ",".join(f"f_{i}" for i in t)] + _gwlp_columns(g)
        for k, (f, g, t) in enumerate(zip(res.removed, res.steps, res.ties), 1)
    ]
    return _csv(rows) if args.format == "csv" else _aligned(rows)


COMMANDS = {
    "check": (cmd_check, "strength and OA class of a design"),
    "gwlp": (cmd_gwlp, "exact and rounded GWLP"),
    "wmatrix": (cmd_wmatrix, "W_j matrix with the w_{j,f} column"),
    "rank1": (cmd_rank1, "rank all single-run removals"),
    "remove": (cmd_remove, "exhaustive search over removals of p runs"),
    "greedy": (cmd_greedy, "remove runs one at a time"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--output", "-o", help="write data here instead of stdout")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="oagwlp", description="GWLPs of orthogonal arrays with removed runs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("file")
        if name == "wmatrix":
            sp.add_argument("--order", type=int, required=True)
        if name in ("remove", "greedy"):
            sp.add_argument("--p", type=int, required=True)
        if name == "remove":
            sp.add_argument("--max-subsets", type=int, default=DEFAULT_MAX_SUBSETS)
            sp.add_argument("--reps", type=int, default=DEFAULT_REPRESENTATIVES)
            sp.add_argument("--force", action="store_true", help="ignore --max-subsets")
        if name == "greedy":
            sp.add_argument("--first", type=int, help="force the first removed run (1-based)")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.threads < 1:
        print("oagwlp: error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        fraction = read_oa_file(args.file)
    except OSError as exc:
        print(f"oagwlp: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as exc:
        print(f"oagwlp: {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    handler = COMMANDS[args.command][0]
    try:
        out = handler(args, fraction)
    except CapacityError as exc:
        print(f"oagwlp: {exc} (use --force)" if args.command == "remove" else f"oagwlp: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (_UsageError, OagwlpError) as exc:
        print(f"oagwlp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
