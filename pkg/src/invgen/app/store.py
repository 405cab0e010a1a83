"""Line-delimited JSON certificate store.

The first line is a header carrying the engine version and the search
policy; every following line is one CertificateRecord with a fixed key order.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from .. import ENGINE_VERSION
from ..certify import (Certificate, Flagged, PrimeOrderPair, PrimePowerPair,
                       SearchPolicy)

FORMAT = "invgen-certificates"
RECORD_KEYS = ("n", "type", "p", "a", "r", "t", "u", "verified", "reason", "engine_version")


class StoreError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def record_of(cert: Certificate, verified: bool, engine_version: str = ENGINE_VERSION) -> dict:
    if isinstance(cert, PrimeOrderPair):
        rec = {"n": cert.n, "type": "prime_order", "p": cert.p, "r": cert.r,
               "t": cert.t, "u": cert.u, "verified": verified}
    elif isinstance(cert, PrimePowerPair):
        rec = {"n": cert.n, "type": "prime_power", "p": cert.p, "a": cert.a,
               "r": cert.r, "verified": verified}
    elif isinstance(cert, Flagged):
        rec = {"n": cert.n, "type": "flagged", "verified": False, "reason": cert.reason}
    else:
        raise TypeError(f"not a certificate: {cert!r}")
    rec["engine_version"] = engine_version
    return rec


def cert_of(rec: dict) -> Certificate:
    kind = rec["type"]
    if kind == "prime_order":
        return PrimeOrderPair(rec["n"], rec["p"], rec["r"], rec["t"], rec["u"])
    if kind == "prime_power":
        return PrimePowerPair(rec["n"], rec["p"], rec["a"], rec["r"])
    if kind == "flagged":
        return Flagged(rec["n"], rec["reason"])
    raise ValueError(f"unknown record type {kind!r}")


def format_record(rec: dict) -> str:
    return _dumps({k: rec[k] for k in RECORD_KEYS if k in rec})


def header_line(policy: SearchPolicy) -> str:
    return _dumps({"format": FORMAT, "engine_version": ENGINE_VERSION,
                   "fingerprint": policy.fingerprint(),
                   "policy": _header_policy(policy)})


def _header_policy(policy: SearchPolicy) -> dict:
    # verify_inline only changes when checking happens, not what is emitted.
    d = policy.to_dict()
    d.pop("verify_inline", None)
    return dict(sorted(d.items()))


def parse_record(line: str, line_no: int) -> dict:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise StoreError(line_no, f"invalid JSON ({exc.msg})") from None
    if not isinstance(rec, dict):
        raise StoreError(line_no, "record is not an object")
    unknown = set(rec) - set(RECORD_KEYS)
    if unknown:
        raise StoreError(line_no, f"unknown fields {sorted(unknown)}")
    kind = rec.get("type")
    need = {"prime_order": ("n", "p", "r", "t", "u"),
            "prime_power": ("n", "p", "a", "r"),
            "flagged": ("n", "reason")}.get(kind)
    if need is None:
        raise StoreError(line_no, f"unknown record type {kind!r}")
    for k in need:
        if k not in rec:
            raise StoreError(line_no, f"missing field {k!r}")
        if k != "reason" and (not isinstance(rec[k], int) or isinstance(rec[k], bool)):
            raise StoreError(line_no, f"field {k!r} is not an integer")
    if not isinstance(rec.get("verified"), bool):
        raise StoreError(line_no, "missing or non-boolean 'verified'")
    return rec


@dataclass
class Store:
    header: Optional[dict]
    records: List[dict]

    def policy(self) -> Optional[SearchPolicy]:
        if not self.header:
            return None
        return SearchPolicy(**self.header["policy"])


def iter_lines(path: str) -> Iterator[Tuple[int, str]]:
    with open(path, encoding="utf-8") as f:
        for i, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if line.strip():
                yield i, line


def read_store(path: str) -> Store:
    header = None
    records = []
    for i, line in iter_lines(path):
        if i == 1 and '"format"' in line:
            try:
                header = json.loads(line)
            except json.JSONDecodeError as exc:
                raise StoreError(i, f"invalid header ({exc.msg})") from None
            continue
        records.append(parse_record(line, i))
    return Store(header, records)


def write_store(path: str, store: Store) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        if store.header is not None:
            f.write(_dumps(store.header) + "\n")
        for rec in store.records:
            f.write(format_record(rec) + "\n")


def atomic_write_json(path: str, obj: dict) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(obj, f, sort_keys=True)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)
