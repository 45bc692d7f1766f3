"""Serializable analysis reports.

Every location in a report is read from the base AST through an overlay
back-link; nothing here looks at source text or recomputes positions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Iterable, Sequence

from .findings import CycleFinding
from .kernel.scope import Declaration, ShadowFinding
from .sourceref import Span

ANALYSES = ("cycles", "shadowing")


def _span(span: Span | None) -> dict[str, Any] | None:
    return span.to_json() if span is not None else None


def _sort_span(span: Span | None) -> tuple:
    return (0, span.file, span.line_start, span.col_start) if span is not None else (1, "", 0, 0)


def _declaration(decl: Declaration) -> dict[str, Any]:
    ref = decl.backlink
    return {
        "name": decl.name,
        "key": ref.key if ref is not None else decl.name,
        "constant": decl.constant,
        "span": _span(ref.span if ref is not None else None),
    }


def cycle_json(finding: CycleFinding) -> dict[str, Any]:
    return {
        "kind": "cycle",
        "members": [
            {"name": m.name, "key": m.ref.key if m.ref else m.name, "span": _span(m.span)}
            for m in finding.members
        ],
    }


def shadow_json(finding: ShadowFinding) -> dict[str, Any]:
    return {
        "kind": "shadowing",
        "name": finding.name,
        "same_scope": finding.same_scope,
        "shadower": _declaration(finding.shadower),
        "shadowed": _declaration(finding.shadowed),
    }


@dataclass
class AnalysisReport:
    analysis: str
    frontend: str
    inputs: list[str]
    findings: list[CycleFinding | ShadowFinding] = field(default_factory=list)
    stats: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.analysis not in ANALYSES:
            raise ValueError(f"unknown analysis {self.analysis!r}")
        self.findings = canonical_order(self.findings)

    def to_json(self) -> dict[str, Any]:
        encode = cycle_json if self.analysis == "cycles" else shadow_json
        stats = dict(self.stats, findings=len(self.findings))
        return {
            "analysis": self.analysis,
            "frontend": self.frontend,
            "inputs": list(self.inputs),
            "findings": [encode(f) for f in self.findings],
            "stats": stats,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def text(self) -> str:
        lines = [describe(f, i) for i, f in enumerate(self.findings, 1)]
        noun = "cycle" if self.analysis == "cycles" else "shadowing"
        count = len(self.findings)
        lines.append(f"{count} {noun} finding{'' if count == 1 else 's'}")
        return "\n".join(lines) + "\n"


def _location(span: Span | None) -> str:
    return f"{span}: " if span is not None else ""


def describe(finding: CycleFinding | ShadowFinding, index: int = 1) -> str:
    if isinstance(finding, CycleFinding):
        first = finding.members[0].span
        return f"{_location(first)}cycle {index}: {', '.join(finding.labels)}"
    hidden = finding.shadowed
    where = hidden.backlink.span if hidden.backlink is not None else None
    what = "redeclares" if finding.same_scope else "shadows"
    constant = "constant " if hidden.constant else ""
    target = f" declared at {where}" if where is not None else ""
    origin = finding.shadower.backlink.span if finding.shadower.backlink is not None else None
    return f"{_location(origin)}'{finding.name}' {what} {constant}'{hidden.name}'{target}"


def _cycle_key(f: CycleFinding) -> tuple:
    return (_sort_span(f.members[0].span), f.labels)


def _shadow_key(f: ShadowFinding) -> tuple:
    ref = f.shadower.backlink
    return (_sort_span(ref.span if ref else None), ref.key if ref else f.name)


def canonical_order(findings: Iterable[CycleFinding | ShadowFinding]) -> list:
    findings = list(findings)
    cycles = sorted((f for f in findings if isinstance(f, CycleFinding)), key=_cycle_key)
    shadows = sorted((f for f in findings if isinstance(f, ShadowFinding)), key=_shadow_key)
    return cycles + shadows


def load_schema() -> dict[str, Any]:
    text = resources.files(__package__).joinpath("schema/analysis_report.schema.json").read_text("utf-8")
    return json.loads(text)


def member_spans(report: AnalysisReport) -> Sequence[Span | None]:
    """All spans a report points at, for checks that they resolve to real nodes."""
    out: list[Span | None] = []
    for f in report.findings:
        if isinstance(f, CycleFinding):
            out.extend(m.span for m in f.members)
        else:
            for d in (f.shadower, f.shadowed):
                out.append(d.backlink.span if d.backlink else None)
    return out


__all__ = [
    "AnalysisReport",
    "canonical_order",
    "cycle_json",
    "describe",
    "load_schema",
    "member_spans",
    "shadow_json",
]
