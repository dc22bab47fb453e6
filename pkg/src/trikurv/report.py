"""Machine-readable residual reports (JSON and CSV)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from . import __version__
from .solver import ScanTable


def _finite(x: float):
    return x if math.isfinite(x) else None


@dataclass
class ResidualReport:
    rows: list[dict]
    names: list[str]
    max_residuals: dict[str, float]
    max_relative: dict[str, float]
    scales: dict[str, float]
    skipped: int
    verdict: str
    tol: float
    config: dict
    seed: int | None = None
    findings: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    version: str = __version__

    @classmethod
    def from_scan(cls, table: ScanTable, config: dict, seed: int | None = None,
                  findings: list[dict] | None = None) -> ResidualReport:
        rows = [{"s": r.s, "residuals": dict(r.residuals), "scales": dict(r.scales),
                 "verdict": r.verdict, **({"note": r.note} if r.note else {})}
                for r in table.rows]
        return cls(rows=rows, names=list(table.names), max_residuals=table.max_residuals(),
                   max_relative=table.max_relative(), scales=table.max_scales(),
                   skipped=table.skipped, verdict=table.verdict, tol=table.tol,
                   config=config, seed=seed, findings=list(findings or []))

    @property
    def passed(self) -> bool:
        return self.verdict in ("pass", "nonexistence confirmed")

    def as_dict(self) -> dict:
        return {
            "version": self.version,
            "verdict": self.verdict,
            "tol": self.tol,
            "seed": self.seed,
            "config": self.config,
            "skipped": self.skipped,
            "max_residuals": self.max_residuals,
            "max_relative": {k: _finite(v) for k, v in self.max_relative.items()},
            "scales": self.scales,
            "findings": self.findings,
            "details": self.details,
            "rows": self.rows,
        }

    def to_json(self) -> str:
        # json renders floats with repr, the shortest round-trip decimal
        return json.dumps(self.as_dict(), indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", *self.names, *(f"scale:{n}" for n in self.names), "verdict"])
        for row in self.rows:
            res, sc = row.get("residuals", {}), row.get("scales", {})
            w.writerow([_g17(row["s"]),
                        *(_g17(res[n]) if n in res else "" for n in self.names),
                        *(_g17(sc[n]) if n in sc else "" for n in self.names),
                        row["verdict"]])
        return buf.getvalue()


def _g17(x: float) -> str:
    return "%.17g" % x
