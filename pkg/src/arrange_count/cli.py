"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 budget refusal, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import counting, disc
from .cache import CountStore, cache_path_from_env
from .charpoly import CharPolyResult, char_poly
from .errors import BudgetExceeded, VerificationError
from .exact import Partition, parse_partition, partitions_of

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3

# generic-path cross-check for --k 2 is attempted only up to this d
GENERIC_CROSSCHECK_MAX_D = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2)


def _csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _brace_exponents(s: str) -> str:
    out = []
    i = 0
    while i < len(s):
        if s[i] == "^":
            j = i + 1
            while j < len(s) and s[j].isdigit():
                j += 1
            out.append("^{" + s[i + 1:j] + "}")
            i = j
        else:
            out.append(s[i])
            i += 1
    return "".join(out)


def format_charpoly(res: CharPolyResult, fmt: str, details: bool = False) -> str:
    if fmt == "json":
        return _dumps(res.to_json())
    if fmt == "csv":
        rows = [["gamma", "lambda", "mu"]]
        rows += [[" ".join(map(str, r.gamma)), r.lam, r.mu] for r in res.types]
        rows.append([str(res.d + 1), 1, res.mu_max])
        return _csv(rows)
    if fmt == "latex":
        return rf"\chi_{{{res.n},{res.d}}}(t) = {_brace_exponents(str(res.char_poly))}"
    lines = [str(res.char_poly)]
    if details:
        lines.append(f"deconed: {res.deconed}")
        lines.append(f"mu(1^) = {res.mu_max}")
        for r in res.types:
            lines.append(f"{r.gamma.label():>12}  lambda={r.lam}  mu={r.mu}")
    return "\n".join(lines)


def cmd_charpoly(args, store) -> tuple[str, int]:
    if args.n is not None and args.k is not None:
        raise UsageError("give either --n or --k, not both")
    if args.n is None and args.k is None:
        raise UsageError("one of --n or --k is required")
    d = args.d
    n = args.n if args.n is not None else d + args.k + 1
    if d < 0 or n <= d:
        raise UsageError(f"need n > d >= 0 (got n={n}, d={d})")
    k = n - d - 1
    code = EXIT_OK
    notes = []
    if k == 2:
        res = disc.char_poly_disc(d, store=store, workers=args.threads, max_l=args.max_l)
        if d <= GENERIC_CROSSCHECK_MAX_D:
            try:
                other = char_poly(n, d, lam=lambda nn, dd, g: counting.lambda_via_c(nn, dd, g, store=store))
            except BudgetExceeded as exc:
                notes.append(f"generic cross-check skipped: {exc}")
            else:
                if other.char_poly != res.char_poly:
                    notes.append(f"MISMATCH generic path gives {other.char_poly}")
                    code = EXIT_VERIFY
    else:
        res = char_poly(n, d, lam=lambda nn, dd, g: counting.lambda_via_c(nn, dd, g, store=store, workers=args.threads))
    for note in notes:
        print(note, file=sys.stderr)
    return format_charpoly(res, args.format, args.details), code


def cmd_lambda(args, store) -> tuple[str, int]:
    gamma = parse_partition(args.gamma)
    n, d = args.n, args.d
    if gamma == Partition((d + 1,)):
        value, decomposition = 1, []
    else:
        decomposition = counting.c_decomposition(n, d, gamma, store, args.threads) if gamma else []
        value = counting.lambda_via_c(n, d, gamma, store, args.threads)
    if args.format == "json":
        return _dumps({"n": n, "d": d, "gamma": list(gamma), "lambda": str(value),
                       "c": [[j, str(c)] for j, c in decomposition]}), EXIT_OK
    if args.format == "csv":
        return _csv([["j", "c"]] + [[j, c] for j, c in decomposition] + [["lambda", value]]), EXIT_OK
    if args.format == "latex":
        return rf"\lambda_{{{n},{d}}}{gamma.label()} = {value}", EXIT_OK
    lines = [str(value)] + [f"c({j},{d};{tuple(gamma)}) = {c}" for j, c in decomposition]
    return "\n".join(lines), EXIT_OK


def cmd_cvalue(args, store) -> tuple[str, int]:
    gamma = parse_partition(args.gamma)
    if not gamma:
        raise UsageError("gamma must be nonempty")
    value = counting.c_value(args.j, args.d, gamma, store=store, workers=args.threads)
    if args.format == "json":
        return _dumps({"j": args.j, "d": args.d, "gamma": list(gamma), "c": str(value)}), EXIT_OK
    if args.format == "csv":
        return _csv([["j", "d", "gamma", "c"], [args.j, args.d, " ".join(map(str, gamma)), value]]), EXIT_OK
    if args.format == "latex":
        return rf"c({args.j},{args.d};{tuple(gamma)}) = {value}", EXIT_OK
    return str(value), EXIT_OK


def table1_max_weight(dmax: int) -> int:
    # one row block past the last column shows its top element, but the
    # reference grid stops at weight 7
    return max(dmax, min(dmax + 1, 7))


def table1(dmax: int, store=None, workers: int = 1, max_l: int = disc.V2_MAX_L, allow_partial: bool = False):
    """Rows (partition, [lambda_{d+3,d} for d = 1..dmax]); None marks a refused entry."""
    rows = []
    for w in range(1, table1_max_weight(dmax) + 1):
        for gamma in partitions_of(w):
            values = []
            for d in range(1, dmax + 1):
                try:
                    values.append(disc.lambda_disc(d, gamma, store, workers, max_l))
                except BudgetExceeded:
                    if not allow_partial:
                        raise
                    values.append(None)
            rows.append((gamma, values))
    return rows


def format_table1(rows, dmax: int, fmt: str) -> str:
    def cell(v):
        return "?" if v is None else str(v)

    if fmt == "json":
        return _dumps({"dmax": dmax, "rows": [{"gamma": list(g), "values": [None if v is None else str(v) for v in vals]}
                                             for g, vals in rows]})
    if fmt == "csv":
        return _csv([["gamma"] + [f"d={d}" for d in range(1, dmax + 1)]]
                    + [[" ".join(map(str, g))] + [cell(v) for v in vals] for g, vals in rows])
    if fmt == "latex":
        out = [r"\begin{tabular}{c" + "r" * dmax + "}",
               r"$\gamma$ & " + " & ".join(f"$d={d}$" for d in range(1, dmax + 1)) + r" \\",
               r"\hline"]
        weight = 1
        for g, vals in rows:
            if g.weight != weight:
                out.append(r"\hline")
                weight = g.weight
            out.append(g.latex_label() + " & " + " & ".join(cell(v) for v in vals) + r" \\")
        out.append(r"\hline")
        out.append(r"\end{tabular}")
        return "\n".join(out)
    width = max(len(cell(v)) for _, vals in rows for v in vals) if rows else 1
    label_w = max(len(g.label()) for g, _ in rows) if rows else 5
    out = ["gamma".ljust(label_w) + " " + " ".join(f"d={d}".rjust(width) for d in range(1, dmax + 1))]
    for g, vals in rows:
        out.append(g.label().ljust(label_w) + " " + " ".join(cell(v).rjust(width) for v in vals))
    return "\n".join(out)


def cmd_table1(args, store) -> tuple[str, int]:
    if args.dmax < 1:
        raise UsageError("--dmax must be >= 1")
    rows = table1(args.dmax, store, args.threads, args.max_l, args.allow_partial)
    return format_table1(rows, args.dmax, args.format), EXIT_OK


def cmd_v2(args, store) -> tuple[str, int]:
    if args.l < 1:
        raise UsageError("--l must be >= 1")
    if args.count_only:
        total = disc.v2_size(args.l, store, args.threads, args.max_l)
        if args.format == "json":
            return _dumps({"l": args.l, "count": str(total)}), EXIT_OK
        return str(total), EXIT_OK
    complexes = list(disc.enumerate_v2(args.l, args.max_l))
    if args.format == "json":
        return _dumps({"l": args.l, "count": str(len(complexes)),
                       "complexes": [[list(f) for f in c.facet_sets()] for c in complexes]}), EXIT_OK
    if args.format == "csv":
        return _csv([["facets"]] + [[" ".join("".join(map(str, f)) for f in c.facet_sets())] for c in complexes]), EXIT_OK
    return "\n".join(str(c) for c in complexes), EXIT_OK


def cmd_verify(args, store) -> tuple[str, int]:
    from .oracle import oracle_char_poly

    try:
        seeds = [int(s) for s in args.seeds.split(",") if s]
    except ValueError:
        raise UsageError(f"malformed --seeds {args.seeds!r}") from None
    report = oracle_char_poly(args.n, args.d, seeds)
    status = "PASS" if report.ok else "FAIL"
    if args.format == "json":
        text = _dumps({
            "n": args.n, "d": args.d, "seeds": report.seeds, "status": status,
            "rank_sizes": report.rank_sizes,
            "char_poly": [str(c) for c in report.char_poly.descending()],
            "checks": {k: ("PASS" if v else "FAIL") for k, v in report.checks.items()},
        })
    else:
        lines = [f"{status} A_{{{args.n},{args.d}}} seeds={report.seeds}",
                 f"rank sizes {report.rank_sizes}",
                 f"chi = {report.char_poly}"]
        lines += [f"  {'PASS' if v else 'FAIL'} {k}" for k, v in report.checks.items()]
        lines += [f"  note: {n}" for n in report.notes]
        text = "\n".join(lines)
    return text, EXIT_OK if report.ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv", "latex"], default="text")
    common.add_argument("--cache", default=None, help="JSON cache file (default: $ARRANGE_COUNT_CACHE)")
    common.add_argument("--threads", type=int, default=1, help="worker processes for the engines")
    common.add_argument("--max-l", type=int, default=disc.V2_MAX_L, help="cap on V2 enumeration size")

    p = _Parser(prog="arrange-count", description="Exact counts for arrangements generated by generic points.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("charpoly", parents=[common], help="characteristic polynomial of L_{n,d}")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--details", action="store_true", help="also print mu(1^) and the type table")
    s.set_defaults(func=cmd_charpoly)

    s = sub.add_parser("lambda", parents=[common], help="number of elements of a given type")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--gamma", required=True, help="comma-separated partition, e.g. 2,2,1")
    s.set_defaults(func=cmd_lambda)

    s = sub.add_parser("cvalue", parents=[common], help="c(j,d;gamma)")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--gamma", required=True)
    s.set_defaults(func=cmd_cvalue)

    s = sub.add_parser("table1", parents=[common], help="lambda_{d+3,d}(gamma) for d = 1..dmax")
    s.add_argument("--dmax", type=int, default=5)
    s.add_argument("--allow-partial", action="store_true")
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("v2", parents=[common], help="enumerate or count V2(l)")
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_v2)

    s = sub.add_parser("verify", parents=[common], help="geometric cross-check on A_{n,d}")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--seeds", default="1,2,3")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    path = args.cache or cache_path_from_env()
    store = CountStore()
    if path:
        store.load(path)
    try:
        text, code = args.func(args, store)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    print(text)
    if path:
        store.save(path)
    return code


if __name__ == "__main__":
    sys.exit(main())
