"""Domain-independent dependency graph and SCC-based cycle detection.

The graph stores both edge directions on insertion, so the backward pass of
Kosaraju's algorithm walks predecessor lists instead of materializing an
inverted graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain
from typing import Iterable, Iterator, Sequence

from ..errors import StructureError
from ..sourceref import SourceRef


class Component:
    """View of one graph node; the adjacency itself lives in the graph's arrays."""

    __slots__ = ("graph", "id")

    def __init__(self, graph: "DependencyGraph", id: int) -> None:
        self.graph = graph
        self.id = id

    @property
    def successors(self) -> list[int]:
        return self.graph.successors[self.id]

    @property
    def predecessors(self) -> list[int]:
        return self.graph.predecessors[self.id]

    @property
    def backlink(self) -> SourceRef | None:
        return self.graph.backlinks[self.id]

    @property
    def label(self) -> str | None:
        return self.graph.labels[self.id]

    @property
    def name(self) -> str:
        """Display name: the label if set, else the backlink key, else ``n<id>``."""
        return self.graph.name(self.id)

    def has_self_edge(self) -> bool:
        return self.id in self.graph.successors[self.id]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Component) and other.graph is self.graph and other.id == self.id

    def __hash__(self) -> int:
        return hash((id(self.graph), self.id))

    def __repr__(self) -> str:
        return f"Component({self.id}, {self.name!r})"


class DependencyGraph:
    """Directed graph over dense integer ids with both edge directions stored.

    ``backlink`` optionally ties the whole graph to the base tree root it was
    derived from.
    """

    def __init__(self, backlink: SourceRef | None = None) -> None:
        self.successors: list[list[int]] = []
        self.predecessors: list[list[int]] = []
        self.backlinks: list[SourceRef | None] = []
        self.labels: list[str | None] = []
        self.backlink = backlink

    def __len__(self) -> int:
        return len(self.successors)

    def __iter__(self) -> Iterator[Component]:
        return (Component(self, i) for i in range(len(self.successors)))

    def __getitem__(self, id: int) -> Component:
        self._check(id)
        return Component(self, id)

    @property
    def components(self) -> list[Component]:
        return list(self)

    def name(self, id: int) -> str:
        label = self.labels[id]
        if label is not None:
            return label
        ref = self.backlinks[id]
        if ref is not None:
            return ref.key
        return f"n{id}"

    def add_component(self, backlink: SourceRef | None = None, label: str | None = None) -> int:
        id = len(self.successors)
        self.successors.append([])
        self.predecessors.append([])
        self.backlinks.append(backlink)
        self.labels.append(label)
        return id

    def add_components(
        self, backlinks: Iterable[SourceRef | None], labels: Iterable[str | None] | None = None
    ) -> range:
        """Bulk :meth:`add_component`; returns the range of new ids."""
        start = len(self.successors)
        self.backlinks.extend(backlinks)
        n = len(self.backlinks)
        if labels is None:
            self.labels.extend([None] * (n - start))
        else:
            self.labels.extend(labels)
            if len(self.labels) != n:
                del self.backlinks[start:], self.labels[start:]
                raise StructureError("backlinks and labels differ in length")
        self.successors.extend([] for _ in range(n - start))
        self.predecessors.extend([] for _ in range(n - start))
        return range(start, n)

    def add_dependency(self, source: int, target: int) -> None:
        self._check(source)
        self._check(target)
        self.successors[source].append(target)
        self.predecessors[target].append(source)

    def add_dependencies(self, pairs: Iterable[tuple[int, int]]) -> None:
        """Bulk :meth:`add_dependency`; all ids are validated before any edge is added."""
        pairs = pairs if isinstance(pairs, list) else list(pairs)
        ids = list(chain.from_iterable(pairs))
        if ids:
            if len(ids) != 2 * len(pairs):
                raise StructureError("dependencies must be (source, target) pairs")
            if set(map(type, ids)) != {int}:
                for id in ids:
                    self._check(id)
            self._check(min(ids))
            self._check(max(ids))
        succ, pred = self.successors, self.predecessors
        for a, b in pairs:
            succ[a].append(b)
            pred[b].append(a)

    @property
    def edge_count(self) -> int:
        return sum(map(len, self.successors))

    @property
    def size(self) -> int:
        """Nodes plus edges, the "graph size" reported by the benchmark."""
        return len(self.successors) + self.edge_count

    def edges(self) -> Iterator[tuple[int, int]]:
        for a, targets in enumerate(self.successors):
            for b in targets:
                yield a, b

    def reversed(self) -> "DependencyGraph":
        """A copy with every edge flipped; backlinks and labels are shared."""
        g = DependencyGraph(self.backlink)
        g.add_components(self.backlinks, self.labels)
        g.add_dependencies((b, a) for a, b in self.edges())
        return g

    def _check(self, id: object) -> None:
        if not isinstance(id, int) or isinstance(id, bool) or not 0 <= id < len(self.successors):
            raise StructureError(f"unknown component id {id!r}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DependencyGraph":
        g = cls()
        g.add_components([None] * n)
        g.add_dependencies(edges)
        return g


@dataclass(frozen=True)
class SccPartition:
    """Canonical SCC partition: members sorted, groups sorted by smallest member."""

    groups: tuple[tuple[int, ...], ...]
    group_of: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[int]], n: int | None = None) -> "SccPartition":
        canon = sorted((tuple(sorted(g)) for g in groups), key=lambda g: g[0])
        if n is None:
            n = sum(len(g) for g in canon)
        group_of = [-1] * n
        for i, g in enumerate(canon):
            for v in g:
                group_of[v] = i
        return cls(tuple(canon), tuple(group_of))

    def __len__(self) -> int:
        return len(self.groups)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.groups)

    def as_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(g) for g in self.groups)


def scc(graph: DependencyGraph) -> SccPartition:
    """Strongly connected components (Kosaraju-Sharir).

    Pass one: post-order DFS along successors, prepending each finished
    vertex.  Pass two: in that order, flood unassigned vertices along
    predecessors.  Both passes use explicit stacks.
    """
    succ = graph.successors
    pred = graph.predecessors
    n = len(succ)

    visited = [False] * n
    finished: list[int] = []
    for root in range(n):
        if visited[root]:
            continue
        visited[root] = True
        stack = [(root, iter(succ[root]))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if not visited[w]:
                    visited[w] = True
                    stack.append((w, iter(succ[w])))
                    break
            else:
                stack.pop()
                finished.append(v)

    assigned = [-1] * n
    groups: list[list[int]] = []
    for v in reversed(finished):
        if assigned[v] >= 0:
            continue
        label = len(groups)
        members = [v]
        assigned[v] = label
        todo = [v]
        while todo:
            u = todo.pop()
            for w in pred[u]:
                if assigned[w] < 0:
                    assigned[w] = label
                    members.append(w)
                    todo.append(w)
        groups.append(members)
    return SccPartition.from_groups(groups, n)


def nontrivial_sccs(partition: SccPartition, graph: DependencyGraph) -> tuple[tuple[int, ...], ...]:
    """Groups that carry a cycle: more than one member, or a self-edge."""
    out = []
    for g in partition.groups:
        if len(g) > 1 or g[0] in graph.successors[g[0]]:
            out.append(g)
    return tuple(out)


def condensation(graph: DependencyGraph, partition: SccPartition) -> dict[int, set[int]]:
    """Group index -> set of successor group indices (no self-loops)."""
    dag: dict[int, set[int]] = {i: set() for i in range(len(partition))}
    for a, b in graph.edges():
        ga, gb = partition.group_of[a], partition.group_of[b]
        if ga != gb:
            dag[ga].add(gb)
    return dag


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(graph: DependencyGraph, partition: SccPartition | None = None) -> str:
    """GraphViz DOT text; nontrivial SCCs become ``cluster_<i>`` subgraphs."""
    lines = ["digraph {"]
    clustered: set[int] = set()
    if partition is not None:
        for i, group in enumerate(nontrivial_sccs(partition, graph)):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f"    label={_dot_id(f'cycle {i + 1}')};")
            for v in group:
                lines.append(f"    n{v} [label={_dot_id(graph.name(v))}];")
                clustered.add(v)
            lines.append("  }")
    for v in range(len(graph)):
        if v not in clustered:
            lines.append(f"  n{v} [label={_dot_id(graph.name(v))}];")
    for a, b in sorted(set(graph.edges())):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def partition_labels(partition: SccPartition, graph: DependencyGraph) -> list[list[str]]:
    return [[graph.name(v) for v in g] for g in partition.groups]


def groups_by_name(groups: Sequence[Sequence[int]], graph: DependencyGraph) -> frozenset[frozenset[str]]:
    return frozenset(frozenset(graph.name(v) for v in g) for g in groups)
