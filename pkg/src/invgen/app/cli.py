"""Command-line entry point: certify, scan, verify, oracle, kummer, e2, report.

Exit codes: 0 success, 1 flagged/refuted/failed verification, 2 usage or
parse error, 3 checkpoint mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from ..certify import Flagged, SearchPolicy, certify, verify
from ..e2stats import E2Config, scan_intervals, stats_to_csv
from ..kummer import binomial_cover_check
from ..permgroups import CycleType, invariably_generates
from .scan import CheckpointMismatch, ScanSummary, run_scan
from .store import StoreError, cert_of, format_record, iter_lines, parse_record, record_of

log = logging.getLogger("invgen")

EXIT_OK, EXIT_FLAGGED, EXIT_USAGE, EXIT_CHECKPOINT = 0, 1, 2, 3

# Built-in defaults; a --config JSON file overrides them and flags override both.
DEFAULTS = {
    "mode": "prime-order", "c": 0.02, "max_h": None, "growth": 2.0, "h0": "paper",
    "jobs": 1, "out": None, "checkpoint": None, "seed": 0, "unsafe_lemma": False,
    "chunk": 1000,
}


def _int_like(text: str) -> int:
    value = float(text) if any(ch in text for ch in "eE.") else int(text)
    if value != int(value):
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return int(value)


def _shared_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--config", help="JSON file with flag defaults")
    p.add_argument("--mode", choices=["prime-order", "question1"])
    p.add_argument("--c", type=float)
    p.add_argument("--max-h", dest="max_h", type=_int_like)
    p.add_argument("--h0", help="'paper' or a fixed initial h")
    p.add_argument("--growth", type=float)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out")
    p.add_argument("--checkpoint")
    p.add_argument("--seed", type=int)
    p.add_argument("--chunk", type=int)
    p.add_argument("--unsafe-lemma", dest="unsafe_lemma", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(prog="invgen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", parents=[shared], help="certify one n")
    p.add_argument("n", type=_int_like)

    p = sub.add_parser("scan", parents=[shared], help="certify a range into JSONL")
    p.add_argument("lo", type=_int_like)
    p.add_argument("hi", type=_int_like)

    p = sub.add_parser("verify", parents=[shared], help="re-verify a certificate file")
    p.add_argument("file")

    p = sub.add_parser("oracle", parents=[shared], help="invariable generation oracle")
    p.add_argument("n", type=int)
    p.add_argument("type1")
    p.add_argument("type2")
    p.add_argument("--sample", type=int, help="sample K conjugate pairs instead of enumerating")

    p = sub.add_parser("kummer", parents=[shared], help="binomial cover check")
    p.add_argument("n", type=_int_like)
    p.add_argument("p1", type=_int_like)
    p.add_argument("p2", type=_int_like)

    p = sub.add_parser("e2", parents=[shared], help="semiprime short-interval statistics")
    p.add_argument("--x-max", dest="x_max", type=_int_like, required=True)
    p.add_argument("--h", dest="h", type=_int_like, required=True)
    p.add_argument("--sample", type=int, default=10_000)
    p.add_argument("--stride", type=int)
    p.add_argument("--all", dest="all_x", action="store_true")
    p.add_argument("--p1-window", dest="p1_window", type=_int_like, nargs=2)

    p = sub.add_parser("report", parents=[shared], help="summarize a scan file")
    p.add_argument("file")
    return parser


def resolve(ns: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    cfg_path = getattr(ns, "config", None)
    if cfg_path:
        with open(cfg_path, encoding="utf-8") as f:
            cfg = json.load(f)
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        opts.update(cfg)
    opts.update({k: v for k, v in vars(ns).items() if k in DEFAULTS})
    return opts


def policy_from(opts: dict, verify_inline: bool = True) -> SearchPolicy:
    h0 = opts["h0"]
    if h0 != "paper":
        h0 = int(h0)
    return SearchPolicy(c=opts["c"], h0=h0, growth=opts["growth"], max_h=opts["max_h"],
                        mode=opts["mode"], verify_inline=verify_inline,
                        unsafe_lemma=opts["unsafe_lemma"])


def cmd_certify(ns, opts) -> int:
    policy = policy_from(opts)
    cert = certify(ns.n, policy)
    ok = False if isinstance(cert, Flagged) else verify(cert, policy.unsafe_lemma)
    print(format_record(record_of(cert, ok)))
    return EXIT_FLAGGED if isinstance(cert, Flagged) else EXIT_OK


def _print_summary(summary: ScanSummary, c: float) -> None:
    print(json.dumps(summary.as_dict(c), sort_keys=True))


def cmd_scan(ns, opts) -> int:
    out = opts["out"] or f"scan_{ns.lo}_{ns.hi}.jsonl"
    policy = policy_from(opts, verify_inline=False)
    try:
        summary = run_scan(ns.lo, ns.hi, policy, out, opts["checkpoint"],
                           jobs=opts["jobs"], chunk=opts["chunk"])
    except CheckpointMismatch as exc:
        print(f"refusing to resume: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    _print_summary(summary, policy.c)
    return EXIT_OK


def verify_file(path: str, stream=None) -> int:
    stream = stream or sys.stdout
    lines = list(iter_lines(path))
    unsafe = False
    if lines and '"format"' in lines[0][1] and lines[0][0] == 1:
        unsafe = bool(json.loads(lines[0][1]).get("policy", {}).get("unsafe_lemma", False))
        lines = lines[1:]
    if not lines:
        log.warning("%s contains no certificate records", path)
        return EXIT_OK
    failures = 0
    for line_no, line in lines:
        try:
            rec = parse_record(line, line_no)
        except StoreError as exc:
            print(f"malformed record: {exc}", file=stream)
            return EXIT_USAGE
        if rec["type"] == "flagged":
            continue
        if not verify(cert_of(rec), unsafe_lemma=unsafe):
            failures += 1
            print(f"line {line_no}: verification failed for n={rec['n']}: {line}", file=stream)
    return EXIT_FLAGGED if failures else EXIT_OK


def cmd_verify(ns, opts) -> int:
    return verify_file(ns.file)


def cmd_oracle(ns, opts) -> int:
    ct1, ct2 = CycleType.parse(ns.type1), CycleType.parse(ns.type2)
    if getattr(ns, "sample", None):
        v = invariably_generates(ns.n, ct1, ct2, mode="sample", samples=ns.sample, seed=opts["seed"])
    else:
        v = invariably_generates(ns.n, ct1, ct2)
    print(v.status + (f" seed={v.seed}" if v.seed is not None else ""))
    if v.refuted:
        print(f"witness: {v.witness[0]!r} {v.witness[1]!r}")
        return EXIT_FLAGGED
    return EXIT_OK


def cmd_kummer(ns, opts) -> int:
    ok = binomial_cover_check(ns.n, ns.p1, ns.p2)
    print("true" if ok else "false")
    return EXIT_OK if ok else EXIT_FLAGGED


def cmd_e2(ns, opts) -> int:
    if ns.all_x:
        sample = "all"
    elif ns.stride:
        sample = "stride"
    else:
        sample = "random"
    cfg = E2Config(X=ns.x_max, h=ns.h, c=opts["c"],
                   p1_window=tuple(ns.p1_window) if ns.p1_window else None,
                   sample=sample, K=ns.sample, seed=opts["seed"], stride=ns.stride or 1)
    stats, summary = scan_intervals(cfg)
    text = stats_to_csv(stats)
    if opts["out"]:
        with open(opts["out"], "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        sink = sys.stdout
    else:
        sys.stdout.write(text)
        sink = sys.stderr
    print(json.dumps({"samples": summary.samples, "deficient": summary.deficient,
                      "deficient_fraction": summary.deficient_fraction,
                      "threshold": summary.threshold,
                      "reference_ratio": summary.reference_ratio,
                      "window": list(summary.window)}, sort_keys=True), file=sink)
    return EXIT_OK


def report_file(path: str) -> dict:
    by_type: dict = {}
    cutoffs: dict = {}
    n_max = 0
    total = 0
    for line_no, line in iter_lines(path):
        if line_no == 1 and '"format"' in line:
            continue
        rec = parse_record(line, line_no)
        key = rec["type"] if rec["type"] != "flagged" else f"flagged:{rec['reason']}"
        by_type[key] = by_type.get(key, 0) + 1
        total += 1
        n_max = max(n_max, rec["n"])
        k = len(str(rec["n"] - 1)) if rec["n"] > 1 else 1
        bucket = cutoffs.setdefault(10**k, [0, 0])
        bucket[0] += 1
        bucket[1] += rec["type"] == "flagged"
    # Cumulative flagged fraction for n <= 10^k.
    trend = {}
    seen = flagged = 0
    for cut in sorted(cutoffs):
        seen += cutoffs[cut][0]
        flagged += cutoffs[cut][1]
        trend[str(min(cut, n_max))] = flagged / seen
    flagged_total = sum(v for k, v in by_type.items() if k.startswith("flagged"))
    return {"records": total, "counts": dict(sorted(by_type.items())),
            "flagged_fraction": flagged_total / total if total else 0.0,
            "trend": trend}


def cmd_report(ns, opts) -> int:
    print(json.dumps(report_file(ns.file), sort_keys=True))
    return EXIT_OK


COMMANDS = {"certify": cmd_certify, "scan": cmd_scan, "verify": cmd_verify,
            "oracle": cmd_oracle, "kummer": cmd_kummer, "e2": cmd_e2, "report": cmd_report}


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        opts = resolve(ns)
        return COMMANDS[ns.command](ns, opts)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
