"""Report documents for run-removal results and their serializations."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction as Q

from . import __version__
from .core import GwlpExact
from .removal import RemovalReport

__all__ = ["ReportRow", "ReportDocument", "emit_report", "parse_json_report", "round_half_up", "format_ratio"]

FORMATS = ("text", "csv", "json")


def round_half_up(value: Q, places: int = 3) -> str:
    """Decimal rendering with ties rounded away from zero (values here are >= 0)."""
    value = Q(value)
    scale = 10**places
    q = abs(value) * scale
    k = (q.numerator * 2 + q.denominator) // (2 * q.denominator)
    sign = "-" if value < 0 and k else ""
    whole, frac = divmod(k, scale)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def format_ratio(value: Q) -> str:
    value = Q(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ReportRow:
    count: int
    gwlp: GwlpExact
    representatives: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class ReportDocument:
    input: str
    p: int
    total_subsets: int
    rows: tuple[ReportRow, ...]
    version: str = __version__
    exact: bool = True

    @classmethod
    def from_removal(cls, report: RemovalReport, input_name: str) -> "ReportDocument":
        rows = tuple(ReportRow(g.count, g.gwlp, g.representatives) for g in report.groups)
        return cls(input_name, report.p, report.total_subsets, rows)

    @property
    def m(self) -> int | None:
        return len(self.rows[0].gwlp) - 1 if self.rows else None


def _to_json(doc: ReportDocument) -> str:
    payload = {
        "input": doc.input,
        "p": doc.p,
        "total_subsets": doc.total_subsets,
        "version": doc.version,
        "exact": doc.exact,
        "groups": [
            {
                "count": r.count,
                "gwlp_num": list(r.gwlp.numerators),
                "gwlp_den": r.gwlp.denominator,
                "representatives": [list(t) for t in r.representatives],
            }
            for r in doc.rows
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_json_report(data: str | bytes) -> ReportDocument:
    payload = json.loads(data)
    rows = []
    for g in payload["groups"]:
        den = g["gwlp_den"]
        rows.append(ReportRow(g["count"], GwlpExact(tuple(g["gwlp_num"]), den, math.isqrt(den)), tuple(tuple(t) for t in g["representatives"])))
    return ReportDocument(
        payload["input"],
        payload["p"],
        payload["total_subsets"],
        tuple(rows),
        payload.get("version", __version__),
        payload.get("exact", True),
    )


def _table(doc: ReportDocument) -> tuple[list[str], list[list[str]]]:
    m = doc.m or 0
    header = ["p", "N"] + [f"A_{j}" for j in range(1, m + 1)] + ["representatives"]
    body = []
    for r in doc.rows:
        reps = " ".join("{" + ",".join(map(str, t)) + "}" for t in r.representatives)
        body.append([str(doc.p), str(r.count)] + [round_half_up(v) for v in r.gwlp.values[1:]] + [reps])
    return header, body


def _to_csv(doc: ReportDocument) -> str:
    header, body = _table(doc)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(body)
    return buf.getvalue()


def _to_text(doc: ReportDocument) -> str:
    header, body = _table(doc)
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = [
        f"# {doc.input}: {doc.total_subsets} subsets of size {doc.p}, {len(doc.rows)} distinct GWLPs",
        "  ".join(h.rjust(w) for h, w in zip(header, widths)).rstrip(),
    ]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() for row in body]
    return "\n".join(lines) + "\n"


def emit_report(doc: ReportDocument, format: str = "text") -> bytes:
    if format == "json":
        out = _to_json(doc)
    elif format == "csv":
        out = _to_csv(doc)
    elif format == "text":
        out = _to_text(doc)
    else:
        raise ValueError(f"unknown format {format!r}; choose from {FORMATS}")
    return out.encode("utf-8")
