"""Command-line interface.

Subcommands map one-to-one onto the pipeline stages; all machine-readable
output is UTF-8 JSON with lowercase snake_case keys and unbounded integers
(string-encoded beyond 64 bits).  Exit codes: 0 success, 2 reproduction
mismatch against the golden fixtures, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import cmhom, pipeline, universal


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitjac",
        description="Exact classification of genus-2 curves with maps of every "
        "degree to a fixed elliptic curve, and universality checks for the four "
        "associated quaternary forms.",
    )
    parser.add_argument("--jobs", type=int, default=1, metavar="K",
                        help="worker processes for the candidate sweeps")
    parser.add_argument("--golden", metavar="PATH", default=None,
                        help="override the embedded golden fixture file")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("lemma-lists", help="emit the eight norm-form discriminant lists")
    sub.add_parser("screen", help="emit the 18 surviving discriminant pairs")

    classify = sub.add_parser("classify", help="emit the 20 classification rows")
    classify.add_argument("--format", choices=("json", "csv", "table"), default="json")

    represent = sub.add_parser("represent", help="represent one integer by one form")
    represent.add_argument("--form", type=int, choices=(1, 2, 3, 4), required=True)
    represent.add_argument("--n", type=int, required=True)

    verify = sub.add_parser("verify-universal",
                            help="constructively represent every integer up to a bound")
    verify.add_argument("--form", type=int, choices=(1, 2, 3, 4), required=True)
    verify.add_argument("--max", type=int, required=True, dest="nmax")
    verify.add_argument("--oracle-max", type=int, default=None, dest="oracle_max",
                        help="cross-check against brute-force enumeration up to M")

    sub.add_parser("check-59", help="certify the excluded discriminant -59")
    return parser


def _cmd_lemma_lists(args) -> int:
    lists = pipeline.run_lemma_lists()
    pipeline.check_lemma_lists(lists, pipeline.load_golden(args.golden))
    sys.stdout.write(pipeline.dumps({str(k): list(v) for k, v in lists.items()}))
    return 0


def _cmd_screen(args) -> int:
    pairs = pipeline.run_screen()
    pipeline.check_screen(pairs, pipeline.load_golden(args.golden))
    payload = [
        {"delta_e": de, "delta_f": df, "isomorphic": iso} for de, df, iso in pairs
    ]
    sys.stdout.write(pipeline.dumps(payload))
    return 0


def _cmd_classify(args) -> int:
    rows, report = pipeline.run_search(jobs=args.jobs)
    pipeline.check_classification(rows, pipeline.load_golden(args.golden))
    dicts = [r.to_dict() for r in rows]
    if args.format == "json":
        sys.stdout.write(pipeline.dumps(dicts))
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["index", "delta_e", "delta_f", "tau", "sigma", "form_id",
                         "gram", "witness"])
        for d in dicts:
            writer.writerow([
                d["index"], d["delta_e"], d["delta_f"], d["tau"], d["sigma"],
                d["form_id"],
                " ".join(str(x) for row in d["gram"] for x in row),
                " ".join(str(x) for row in d["witness"] for x in row),
            ])
        sys.stdout.write(buf.getvalue())
    else:
        header = f"{'no':>3} {'delta_e':>8} {'delta_f':>8} {'tau':<22} {'sigma':<24} form"
        lines = [header, "-" * len(header)]
        for d in dicts:
            lines.append(
                f"{d['index']:>3} {d['delta_e']:>8} {d['delta_f']:>8} "
                f"{d['tau']:<22} {d['sigma']:<24} q{d['form_id']}"
            )
        sys.stdout.write("\n".join(lines) + "\n")
    sys.stderr.write(
        f"candidates={report.candidates} survivors={report.survivors}\n"
    )
    return 0


def _cmd_represent(args) -> int:
    rep = universal.represent(args.form, args.n)
    sys.stdout.write(pipeline.dumps({
        "form_id": rep.form_id,
        "n": rep.n,
        "vector": list(rep.vector),
        "trace": list(rep.trace),
    }))
    return 0


def _cmd_verify_universal(args) -> int:
    report = universal.verify_universal(args.form, args.nmax)
    payload: dict = dict(report)
    if args.oracle_max is not None:
        enum = universal.represented_by_enumeration(args.form, args.oracle_max)
        missing = sorted(set(range(2, args.oracle_max + 1)) - enum)
        assert not missing, f"enumeration misses {missing[:5]}"
        assert 1 not in enum
        payload["oracle_max"] = args.oracle_max
        payload["oracle_agrees"] = True
    sys.stdout.write(pipeline.dumps(payload))
    return 0


def _cmd_check_59(args) -> int:
    sys.stdout.write(pipeline.dumps(cmhom.disc59_check()))
    return 0


_COMMANDS = {
    "lemma-lists": _cmd_lemma_lists,
    "screen": _cmd_screen,
    "classify": _cmd_classify,
    "represent": _cmd_represent,
    "verify-universal": _cmd_verify_universal,
    "check-59": _cmd_check_59,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.jobs < 1:
        print("--jobs must be at least 1", file=sys.stderr)
        return 3
    try:
        return _COMMANDS[args.command](args)
    except pipeline.ReproductionMismatch as exc:
        print(f"reproduction mismatch: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
