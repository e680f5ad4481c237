"""Report documents and their JSON, markdown and CSV renderings.

All three renderings read the same :class:`ReportDocument`; nothing is
recomputed while rendering.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

from .analysis import ComparisonTable, Discrepancy, FormulaCheck, MetricsReport

SCHEMA = 1


@dataclass
class ReportDocument:
    title: str
    metrics: dict[str, MetricsReport] = field(default_factory=dict)
    tables: list[ComparisonTable] = field(default_factory=list)
    formulas: list[FormulaCheck] = field(default_factory=list)
    discrepancies: list[Discrepancy] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    generated: str | None = None  # timestamp, left out for reproducible output

    def as_dict(self) -> dict:
        d: dict = {"schema": SCHEMA, "title": self.title}
        if self.generated:
            d["generated"] = self.generated
        if self.metrics:
            d["metrics"] = {k: m.as_dict() for k, m in self.metrics.items()}
        if self.tables:
            d["tables"] = [
                {"title": t.title, "metric": t.metric, "columns": t.columns(), "rows": t.cells()}
                for t in self.tables
            ]
        if self.formulas:
            d["formulas"] = [dict(asdict(f), ok=f.ok) for f in self.formulas]
            d["formulas_pass"] = all(f.ok for f in self.formulas if f.binding)
        if self.discrepancies:
            d["discrepancies"] = [asdict(x) for x in self.discrepancies]
        if self.notes:
            d["notes"] = list(self.notes)
        return d


def to_json(doc: ReportDocument) -> str:
    return json.dumps(doc.as_dict(), indent=2, ensure_ascii=False) + "\n"


def _md_table(columns: list[str], rows: list[list[object]]) -> list[str]:
    out = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    out += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return out


def _formula_rows(doc: ReportDocument) -> list[list[object]]:
    rows = []
    for f in doc.formulas:
        status = "pass" if f.ok else ("FAIL" if f.binding else "differs (recorded only)")
        rows.append([f.family, f.n, f.metric, f.expected, f.measured, status])
    return rows


_FORMULA_COLS = ["family", "n", "metric", "closed form", "measured", "status"]
_METRIC_COLS = ["circuit", "quantum cost", "step delay", "ASAP depth", "ancilla", "garbage", "census"]
_LEDGER_COLS = ["subject", "published", "measured", "note"]


def _metric_rows(doc: ReportDocument) -> list[list[object]]:
    return [
        [
            k,
            m.quantum_cost,
            "-" if m.step_delay is None else m.step_delay,
            m.asap_depth,
            m.ancilla_inputs,
            m.garbage_outputs,
            " ".join(f"{g}:{c}" for g, c in m.gate_census.items()),
        ]
        for k, m in doc.metrics.items()
    ]


def to_markdown(doc: ReportDocument) -> str:
    out = [f"# {doc.title}", ""]
    if doc.generated:
        out += [f"Generated {doc.generated}", ""]
    if doc.metrics:
        out += ["## Metrics", ""] + _md_table(_METRIC_COLS, _metric_rows(doc)) + [""]
    for t in doc.tables:
        out += [f"## {t.title}", ""] + _md_table(t.columns(), t.cells()) + [""]
    if doc.formulas:
        out += ["## Closed-form checks", ""] + _md_table(_FORMULA_COLS, _formula_rows(doc)) + [""]
    if doc.discrepancies:
        out += ["## Discrepancy ledger", ""]
        out += _md_table(_LEDGER_COLS, [[x.subject, x.published, x.measured, x.note] for x in doc.discrepancies])
        out += [""]
    if doc.notes:
        out += ["## Notes", ""] + [f"- {n}" for n in doc.notes] + [""]
    return "\n".join(out)


def to_csv(doc: ReportDocument) -> str:
    """Sections separated by a one-cell title row and a blank row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    sections: list[tuple[str, list[str], list[list[object]]]] = []
    if doc.metrics:
        sections.append(("metrics", _METRIC_COLS, _metric_rows(doc)))
    for t in doc.tables:
        sections.append((t.title, t.columns(), t.cells()))
    if doc.formulas:
        sections.append(("closed-form checks", _FORMULA_COLS, _formula_rows(doc)))
    if doc.discrepancies:
        sections.append(
            ("discrepancy ledger", _LEDGER_COLS, [[x.subject, x.published, x.measured, x.note] for x in doc.discrepancies])
        )
    for i, (title, cols, rows) in enumerate(sections):
        if i:
            w.writerow([])
        w.writerow([title])
        w.writerow(cols)
        w.writerows(rows)
    return buf.getvalue()


RENDERERS = {"json": to_json, "markdown": to_markdown, "md": to_markdown, "csv": to_csv}
