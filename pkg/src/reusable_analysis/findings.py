"""Analysis results expressed in frontend terms, read through overlay back-links."""

from __future__ import annotations

from dataclasses import dataclass

from .kernel.graph import DependencyGraph, nontrivial_sccs, scc
from .sourceref import SourceRef, Span


@dataclass(frozen=True)
class CycleMember:
    name: str
    ref: SourceRef | None

    @property
    def span(self) -> Span | None:
        return self.ref.span if self.ref is not None else None


@dataclass(frozen=True)
class CycleFinding:
    """One nontrivial SCC; members sorted by name."""

    members: tuple[CycleMember, ...]

    @property
    def labels(self) -> list[str]:
        return [m.name for m in self.members]


def cycle_findings(dg: DependencyGraph) -> list[CycleFinding]:
    """Nontrivial SCCs of ``dg``, each member named via its back-link or label."""
    groups = nontrivial_sccs(scc(dg), dg)
    return canonical_cycles(
        [[CycleMember(dg.name(v), dg.backlinks[v]) for v in g] for g in groups]
    )


def canonical_cycles(groups: list[list[CycleMember]]) -> list[CycleFinding]:
    for g in groups:
        g.sort(key=lambda m: m.name)
    groups.sort(key=lambda g: [m.name for m in g])
    return [CycleFinding(tuple(g)) for g in groups]
