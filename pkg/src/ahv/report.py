"""Canonical, byte-stable verification reports.

Records are kept in insertion order (campaigns are run in a fixed order and
each campaign emits its records sorted by check id).  Floats are written with
Python's shortest round-trip ``repr``; non-finite values become strings so
the output stays valid JSON.  Wall times live in a separate side file.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA = "ahv-report/1"
PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def _plain(x):
    """Convert numpy scalars/arrays and complex numbers to JSON-ready values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_plain(float(x.real)), _plain(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x != x:
            return "nan"
        if x in (float("inf"), float("-inf")):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def measured(value, tol=None, cmp: str = "<=") -> dict:
    """A number together with the tolerance it was judged against."""
    out = {"value": value}
    if tol is not None:
        out["tol"] = tol
        out["cmp"] = cmp
    return out


@dataclass
class Record:
    check: str
    status: str
    inputs: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    note: str = ""

    def as_dict(self) -> dict:
        d = {"check": self.check, "status": self.status, "inputs": self.inputs, "values": self.values}
        if self.note:
            d["note"] = self.note
        return d


def status_of(ok: bool) -> str:
    return PASS if ok else FAIL


@dataclass
class Report:
    version: str
    config: dict
    records: list[Record] = field(default_factory=list)
    errata: list[dict] = field(default_factory=list)

    def summary(self) -> dict:
        tally = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0}
        for r in self.records:
            tally[r.status] += 1
        return {"total": len(self.records), "passed": tally[PASS], "failed": tally[FAIL],
                "inconclusive": tally[INCONCLUSIVE]}

    @property
    def failed(self) -> int:
        return self.summary()["failed"]

    def as_dict(self) -> dict:
        return {"schema": SCHEMA, "version": self.version, "config": self.config,
                "summary": self.summary(), "records": [r.as_dict() for r in self.records],
                "errata": self.errata}

    def canonical(self) -> str:
        return json.dumps(_plain(self.as_dict()), indent=2, ensure_ascii=True) + "\n"
