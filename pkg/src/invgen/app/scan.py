"""Resumable, order-preserving range scans."""

from __future__ import annotations

import json
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .. import ENGINE_VERSION
from ..certify import Flagged, SearchPolicy, certify, verify
from .store import atomic_write_json, format_record, header_line, record_of

DEFAULT_CHUNK = 1000


class CheckpointMismatch(RuntimeError):
    pass


def certify_range(lo: int, hi: int, policy: SearchPolicy) -> List[str]:
    """Serialized records for every n in [lo, hi]."""
    lines = []
    quiet = SearchPolicy(**{**policy.to_dict(), "verify_inline": False})
    for n in range(lo, hi + 1):
        cert = certify(n, quiet)
        ok = False if isinstance(cert, Flagged) else verify(cert, policy.unsafe_lemma)
        lines.append(format_record(record_of(cert, ok)))
    return lines


def _tally(counts: Counter, lines: List[str]) -> None:
    for line in lines:
        rec = json.loads(line)
        key = rec["type"] if rec["type"] != "flagged" else f"flagged:{rec['reason']}"
        counts[key] += 1
        if rec["type"] != "flagged" and not rec["verified"]:
            counts["unverified"] += 1


def reference_shape(X: int, c: float) -> float:
    """exp(-c sqrt(log X log log X))."""
    L = math.log(X)
    return math.exp(-c * math.sqrt(L * math.log(L)))


@dataclass
class ScanSummary:
    lo: int
    hi: int
    counts: Dict[str, int] = field(default_factory=dict)
    complete: bool = False

    @property
    def total(self) -> int:
        return sum(v for k, v in self.counts.items() if k != "unverified")

    @property
    def flagged(self) -> int:
        return sum(v for k, v in self.counts.items() if k.startswith("flagged"))

    @property
    def flagged_fraction(self) -> float:
        return self.flagged / self.total if self.total else 0.0

    def as_dict(self, c: float) -> dict:
        return {"lo": self.lo, "hi": self.hi, "complete": self.complete,
                "records": self.total, "counts": dict(sorted(self.counts.items())),
                "flagged_fraction": self.flagged_fraction,
                "reference_shape": reference_shape(max(self.hi, 16), c)}


def run_scan(lo: int, hi: int, policy: SearchPolicy, out: str,
             checkpoint: Optional[str] = None, jobs: int = 1,
             chunk: int = DEFAULT_CHUNK, max_chunks: Optional[int] = None) -> ScanSummary:
    """Certify every n in [lo, hi] into ``out``, resuming from ``checkpoint``.

    Output depends only on (lo, hi, policy, engine version).  ``max_chunks``
    stops early after that many chunks, leaving a resumable checkpoint.
    """
    if not 5 <= lo <= hi <= 10**12:
        raise ValueError("scan range must satisfy 5 <= lo <= hi <= 10**12")
    checkpoint = checkpoint or out + ".ckpt"
    fp = policy.fingerprint()
    counts: Counter = Counter()
    start = lo
    if os.path.exists(checkpoint):
        with open(checkpoint, encoding="utf-8") as f:
            ck = json.load(f)
        if ck.get("fingerprint") != fp or ck.get("engine_version") != ENGINE_VERSION:
            raise CheckpointMismatch("checkpoint was written under a different policy or engine")
        if (ck.get("lo"), ck.get("hi")) != (lo, hi):
            raise CheckpointMismatch(f"checkpoint covers [{ck.get('lo')}, {ck.get('hi')}]")
        if not lo - 1 <= ck["last_completed"] <= hi:
            raise CheckpointMismatch("checkpoint position outside its range")
        counts.update(ck["counts"])
        start = ck["last_completed"] + 1
        fh = open(out, "r+b")
        fh.truncate(ck["offset"])
        fh.seek(ck["offset"])
    else:
        fh = open(out, "wb")
        fh.write((header_line(policy) + "\n").encode())

    def save(last: int) -> None:
        fh.flush()
        os.fsync(fh.fileno())
        atomic_write_json(checkpoint, {
            "lo": lo, "hi": hi, "last_completed": last, "offset": fh.tell(),
            "fingerprint": fp, "engine_version": ENGINE_VERSION,
            "counts": dict(counts)})

    bounds = [(a, min(a + chunk - 1, hi)) for a in range(start, hi + 1, chunk)]
    if max_chunks is not None:
        bounds = bounds[:max_chunks]

    def emit(lines: List[str], last: int) -> None:
        fh.write("".join(line + "\n" for line in lines).encode())
        _tally(counts, lines)
        save(last)

    try:
        save(start - 1)
        if jobs <= 1:
            for a, b in bounds:
                emit(certify_range(a, b, policy), b)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                # Bounded look-ahead; results are emitted strictly in order.
                window = 4 * jobs
                pending = {}
                nxt = 0
                for idx, (a, b) in enumerate(bounds):
                    pending[idx] = pool.submit(certify_range, a, b, policy)
                    while len(pending) >= window or (idx == len(bounds) - 1 and pending):
                        emit(pending.pop(nxt).result(), bounds[nxt][1])
                        nxt += 1
    finally:
        fh.close()
    done = (bounds[-1][1] if bounds else start - 1) == hi
    return ScanSummary(lo, hi, dict(counts), complete=done)
