"""Machine-readable verification records and their JSON/CSV serialization.

Reports are deterministic: no timestamps, sorted keys, fixed float formatting.
Running the same suite with the same seed twice produces identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

SCHEMA_VERSION = 1

# stable CSV column order (documented interface)
CSV_FIELDS = ("suite", "check", "anchor", "mode", "measured", "expected", "passed")


@dataclass(frozen=True)
class ReportRecord:
    """One verification outcome.

    `anchor` names the mathematical identity or quantity being checked (or
    "plumbing" for infrastructure checks); `mode` is how `measured` relates
    to `expected`: "le" bounds, "eq" exact equality, "approx" closeness
    already folded into the pass flag.
    """

    suite: str
    check: str
    anchor: str
    mode: str
    measured: float
    expected: float
    passed: bool


def bounded(suite: str, check: str, anchor: str, measured: float, bound: float) -> ReportRecord:
    return ReportRecord(suite, check, anchor, "le", float(measured), float(bound),
                        bool(measured <= bound))


def exact(suite: str, check: str, anchor: str, measured: float, expected: float) -> ReportRecord:
    return ReportRecord(suite, check, anchor, "eq", float(measured), float(expected),
                        bool(measured == expected))


def flag(suite: str, check: str, anchor: str, ok: bool) -> ReportRecord:
    return ReportRecord(suite, check, anchor, "eq", float(bool(ok)), 1.0, bool(ok))


def _float_repr(x: float) -> float:
    # floats serialize through repr, which is already shortest-roundtrip
    return float(x)


def report_payload(records: list[ReportRecord], *, suite: str, seed: int,
                   tol_scale: float, details: dict | None = None) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "suite": suite,
        "seed": seed,
        "tol_scale": _float_repr(tol_scale),
        "passed": all(r.passed for r in records),
        "counts": {"total": len(records),
                   "failed": sum(0 if r.passed else 1 for r in records)},
        "records": [asdict(r) for r in records],
        "details": details or {},
    }


def emit_json(payload: dict, path: Path) -> bytes:
    data = (json.dumps(payload, sort_keys=True, indent=1) + "\n").encode()
    path.write_bytes(data)
    return data


def emit_csv(records: list[ReportRecord], path: Path) -> bytes:
    lines = [",".join(CSV_FIELDS)]
    for r in records:
        d = asdict(r)
        cells = []
        for f in CSV_FIELDS:
            v = d[f]
            if isinstance(v, float):
                cells.append("%.17g" % v)
            elif isinstance(v, bool):
                cells.append("true" if v else "false")
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    data = ("\n".join(lines) + "\n").encode()
    path.write_bytes(data)
    return data


def emit_profile_csv(columns: dict[str, list], path: Path) -> bytes:
    """Plot-ready numeric table with 17-significant-digit formatting."""
    names = list(columns.keys())
    rows = zip(*(columns[n] for n in names))
    lines = [",".join(names)]
    for row in rows:
        lines.append(",".join("%.17g" % float(v) for v in row))
    data = ("\n".join(lines) + "\n").encode()
    path.write_bytes(data)
    return data


def parse_json(data: bytes) -> dict:
    return json.loads(data.decode())
