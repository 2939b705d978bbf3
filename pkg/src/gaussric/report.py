"""Verification reports: per-point residual rows plus an aggregated summary,
serializable to deterministic JSON and CSV.

Rows carry a ``category``; only ``interior`` rows count toward pass/fail and
summary maxima.  Rows whose finite-difference stencils had to fall back to
one-sided differences at the chart boundary are categorized ``edge`` and
reported but excluded from the statistics.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

SCHEMA_VERSION = "gaussric/1"


@dataclass
class ReportRow:
    point: tuple
    residuals: dict
    passed: dict
    category: str = "interior"

    def all_passed(self) -> bool:
        return all(self.passed.values())


@dataclass
class VerificationReport:
    suite: str
    entry: str | None
    grid: dict
    tolerances: dict
    rows: list
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.summary.get("passed", False))

    def interior_rows(self) -> list:
        return [row for row in self.rows if row.category == "interior"]

    def finalize(self, extra: dict | None = None) -> "VerificationReport":
        """Compute the summary from the rows (interior rows only)."""
        interior = self.interior_rows()
        keys = sorted({key for row in interior for key in row.residuals})
        max_residuals = {}
        for key in keys:
            values = [row.residuals[key] for row in interior if key in row.residuals]
            max_residuals[key] = max(values) if values else 0.0
        self.summary = {
            "max_residuals": max_residuals,
            "passed": all(row.all_passed() for row in interior),
            "rows_interior": len(interior),
            "rows_edge": len(self.rows) - len(interior),
        }
        if extra:
            self.summary.update(extra)
        return self

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "entry": self.entry,
            "grid": self.grid,
            "tolerances": self.tolerances,
            "rows": [
                {
                    "point": [float(c) for c in row.point],
                    "category": row.category,
                    "residuals": {k: float(v) for k, v in row.residuals.items()},
                    "passed": {k: bool(v) for k, v in row.passed.items()},
                }
                for row in self.rows
            ],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        """Canonical JSON: sorted keys, fixed indentation, repr floats, so
        identical inputs yield byte-identical output."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        """One row per point; columns are the point coordinates, the row
        category, and the residuals in sorted key order."""
        keys = sorted({key for row in self.rows for key in row.residuals})
        width = max((len(row.point) for row in self.rows), default=0)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([f"point{i}" for i in range(width)] + ["category"] + keys)
        for row in self.rows:
            coords = [repr(float(c)) for c in row.point]
            coords += [""] * (width - len(coords))
            writer.writerow(coords + [row.category] + [repr(float(row.residuals.get(k, 0.0))) for k in keys])
        return buffer.getvalue()

    def text_summary(self) -> str:
        lines = [f"[{self.suite}] entry={self.entry or '-'}"]
        for key, value in sorted(self.summary.get("max_residuals", {}).items()):
            tol = self.tolerances.get(key)
            mark = ""
            if tol is not None:
                mark = "  PASS" if value <= tol else "  FAIL"
                lines.append(f"  {key:<24} max {value:.3e}  tol {tol:.1e}{mark}")
            else:
                lines.append(f"  {key:<24} max {value:.3e}")
        for key in sorted(self.summary):
            if key in ("max_residuals", "passed", "rows_interior", "rows_edge"):
                continue
            value = self.summary[key]
            if isinstance(value, float):
                lines.append(f"  {key:<24} {value:.6e}")
            else:
                lines.append(f"  {key:<24} {value}")
        lines.append(
            f"  rows: {self.summary.get('rows_interior', 0)} interior, "
            f"{self.summary.get('rows_edge', 0)} edge"
        )
        lines.append(f"  result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)
