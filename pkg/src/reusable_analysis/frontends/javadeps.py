"""Shallow Java scanner and type/package dependency overlays.

This is not a Java front end.  It finds the package clause, imports, type
declarations (with nesting) and dotted identifier chains, skipping method
bodies by brace balancing.  Type uses are resolved with a fixed,
approximate policy:

  lexically enclosing types and their members
  > explicit single-type import
  > top-level type of the same package
  > on-demand import
  > globally unique top-level simple name

Anything else (JDK types, generics parameters, unknown names) is dropped.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .._memo import derived
from ..errors import CorpusError, ParseError, ScanError
from ..findings import CycleFinding, CycleMember, canonical_cycles, cycle_findings
from ..kernel.graph import DependencyGraph, scc
from ..lexing import Token, tokenize
from ..sourceref import Frontend, SourceRef, Span

DEFAULT_PACKAGE = "<default>"

JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null var""".split()
)
_TYPE_KEYWORDS = frozenset({"class", "interface", "enum"})


@dataclass(eq=False)
class TypeDecl:
    simple_name: str
    qualified_name: str
    kind: str
    span: Span
    enclosing: "TypeDecl | None" = field(default=None, repr=False)
    nested: dict[str, "TypeDecl"] = field(default_factory=dict, repr=False)
    # dotted identifier chains used inside this type but not inside a nested one
    uses: list[tuple[str, ...]] = field(default_factory=list, repr=False)
    unit: "CompilationUnitFacts | None" = field(default=None, repr=False)


@dataclass(eq=False)
class CompilationUnitFacts:
    file: str
    package: str = ""
    imports: list[str] = field(default_factory=list)
    types: list[TypeDecl] = field(default_factory=list, repr=False)
    referenced: set[str] = field(default_factory=set)

    @property
    def declared_types(self) -> list[tuple[str, str]]:
        return [(t.simple_name, t.qualified_name) for t in self.types]

    @property
    def package_label(self) -> str:
        return self.package or DEFAULT_PACKAGE


def scan_java_file(text: str, path: str = "<input>") -> CompilationUnitFacts:
    try:
        tokens = tokenize(text, path)
    except ParseError as e:
        raise ScanError(e.message, e.file, e.line, e.col) from None
    return _Scanner(tokens, path).run()


class _Scanner:
    def __init__(self, tokens: list[Token], path: str) -> None:
        self.toks = tokens
        self.path = path
        self.i = 0
        self.unit = CompilationUnitFacts(path)
        # each entry: (opening brace token, type declared by it or None)
        self.braces: list[tuple[Token, TypeDecl | None]] = []
        self.header: TypeDecl | None = None
        self.header_tok: Token | None = None

    def fail(self, message: str, tok: Token) -> None:
        raise ScanError(message, self.path, tok.line, tok.col)

    def current_type(self) -> TypeDecl | None:
        if self.header is not None:
            return self.header
        for _, decl in reversed(self.braces):
            if decl is not None:
                return decl
        return None

    def enclosing_type(self) -> TypeDecl | None:
        for _, decl in reversed(self.braces):
            if decl is not None:
                return decl
        return None

    def run(self) -> CompilationUnitFacts:
        toks = self.toks
        while toks[self.i].kind != "eof":
            tok = toks[self.i]
            prev = toks[self.i - 1] if self.i else None
            after_dot = prev is not None and prev.value == "." and prev.kind == "op"
            if tok.kind == "op":
                if tok.value == "{":
                    self.braces.append((tok, self.header))
                    self.header = None
                elif tok.value == "}":
                    if not self.braces:
                        self.fail("unbalanced '}'", tok)
                    self.braces.pop()
                elif tok.value == ";" and self.header is not None:
                    self.fail(f"type {self.header.simple_name} has no body", tok)
                self.i += 1
            elif tok.kind != "ident":
                self.i += 1
            elif tok.value == "package" and not self.braces and self.header is None:
                self.unit.package = ".".join(self._dotted_until_semicolon())
            elif tok.value == "import" and not self.braces and self.header is None:
                self._import()
            elif not after_dot and self._is_type_declaration():
                self._type_declaration()
            elif tok.value in JAVA_KEYWORDS or after_dot:
                self.i += 1
            else:
                self._chain()
        if self.header is not None:
            self.fail(f"truncated declaration of {self.header.simple_name}", self.header_tok)
        if self.braces:
            self.fail("unclosed '{'", self.braces[-1][0])
        return self.unit

    def _dotted_until_semicolon(self) -> list[str]:
        start = self.toks[self.i]
        self.i += 1
        parts: list[str] = []
        while True:
            tok = self.toks[self.i]
            if tok.kind == "eof":
                self.fail("missing ';'", start)
            self.i += 1
            if tok.value == ";":
                return parts
            if tok.kind == "ident" or tok.value == "*":
                parts.append(tok.value)

    def _import(self) -> None:
        parts = self._dotted_until_semicolon()
        if parts and parts[0] == "static":
            # static member import: keep the type it names
            parts = parts[1:-1]
        if parts:
            self.unit.imports.append(".".join(parts))

    def _is_type_declaration(self) -> bool:
        tok = self.toks[self.i]
        nxt = self.toks[self.i + 1]
        if tok.value in _TYPE_KEYWORDS:
            return nxt.kind == "ident"
        if tok.value == "record":
            after = self.toks[self.i + 2] if nxt.kind == "ident" else None
            return after is not None and after.value in ("(", "<")
        return False

    def _type_declaration(self) -> None:
        kw = self.toks[self.i]
        name = self.toks[self.i + 1]
        if self.header is not None:
            self.fail("type declaration inside a type header", kw)
        outer = self.enclosing_type()
        if outer is not None:
            qualified = f"{outer.qualified_name}.{name.value}"
        elif self.unit.package:
            qualified = f"{self.unit.package}.{name.value}"
        else:
            qualified = name.value
        span = Span(self.path, kw.line, kw.col, name.end_line, name.end_col)
        decl = TypeDecl(name.value, qualified, kw.value, span, outer, unit=self.unit)
        if outer is not None:
            outer.nested.setdefault(name.value, decl)
        self.unit.types.append(decl)
        self.header = decl
        self.header_tok = kw
        self.i += 2

    def _chain(self) -> None:
        toks = self.toks
        parts = [toks[self.i].value]
        self.i += 1
        while (
            toks[self.i].value == "."
            and toks[self.i + 1].kind == "ident"
            and toks[self.i + 1].value not in JAVA_KEYWORDS
        ):
            parts.append(toks[self.i + 1].value)
            self.i += 2
        owner = self.current_type()
        if owner is None:
            return
        chain = tuple(parts)
        capitalized = [p for p in chain if p[0].isupper()]
        if not capitalized:
            return
        self.unit.referenced.add(capitalized[0])
        if chain not in owner.uses:
            owner.uses.append(chain)


class Corpus:
    """A set of scanned units with an index of every declared type."""

    def __init__(self, units: Iterable[CompilationUnitFacts]) -> None:
        self.units = list(units)
        self.types: dict[str, TypeDecl] = {}
        self.type_index: dict[str, CompilationUnitFacts] = {}
        self.packages: set[str] = set()
        top_level: dict[str, list[TypeDecl]] = {}
        for unit in self.units:
            self.packages.add(unit.package)
            for t in unit.types:
                if t.qualified_name in self.types:
                    raise CorpusError(
                        f"type {t.qualified_name} declared in both "
                        f"{self.type_index[t.qualified_name].file} and {unit.file}"
                    )
                self.types[t.qualified_name] = t
                self.type_index[t.qualified_name] = unit
                if t.enclosing is None:
                    top_level.setdefault(t.simple_name, []).append(t)
        self.unique_simple = {k: v[0] for k, v in top_level.items() if len(v) == 1}

    def __len__(self) -> int:
        return len(self.units)

    def all_types(self) -> list[TypeDecl]:
        return list(self.types.values())

    def package_labels(self) -> list[str]:
        """Distinct packages in order of first appearance."""
        seen: dict[str, None] = {}
        for u in self.units:
            seen.setdefault(u.package_label, None)
        return list(seen)


def scan_paths(paths: Iterable[str | os.PathLike]) -> Corpus:
    return Corpus(scan_java_file(p.read_text(encoding="utf-8"), str(p)) for p in java_files(paths))


def java_files(paths: Iterable[str | os.PathLike], suffix: str = ".java") -> list[Path]:
    """Expand directories recursively; deterministic sorted order."""
    out: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(f for f in p.rglob(f"*{suffix}") if f.is_file()))
        else:
            out.append(p)
    return out


def _walk_nested(decl: TypeDecl | None, names: tuple[str, ...]) -> TypeDecl | None:
    for n in names:
        if decl is None:
            return None
        nxt = decl.nested.get(n)
        if nxt is None:
            break
        decl = nxt
    return decl


def resolve_simple(corpus: Corpus, site: TypeDecl, name: str) -> TypeDecl | None:
    scope: TypeDecl | None = site
    while scope is not None:
        if scope.simple_name == name:
            return scope
        if name in scope.nested:
            return scope.nested[name]
        scope = scope.enclosing
    unit = site.unit
    for imp in unit.imports:
        if imp.rpartition(".")[2] == name and not imp.endswith("*"):
            return corpus.types.get(imp)
    local = f"{unit.package}.{name}" if unit.package else name
    hit = corpus.types.get(local)
    if hit is not None and hit.enclosing is None:
        return hit
    for imp in unit.imports:
        if imp.endswith(".*"):
            hit = corpus.types.get(f"{imp[:-2]}.{name}")
            if hit is not None:
                return hit
    return corpus.unique_simple.get(name)


def resolve_chain(corpus: Corpus, site: TypeDecl, chain: tuple[str, ...]) -> TypeDecl | None:
    """Resolve a dotted identifier chain used inside ``site`` to a corpus type."""
    for i in range(len(chain), 1, -1):
        hit = corpus.types.get(".".join(chain[:i]))
        if hit is not None:
            return _walk_nested(hit, chain[i:])
    if not chain[0][0].isupper():
        return None
    head = resolve_simple(corpus, site, chain[0])
    return _walk_nested(head, chain[1:]) if head is not None else None


def type_uses(corpus: Corpus, decl: TypeDecl) -> list[TypeDecl]:
    """Distinct corpus types referenced from ``decl``'s own region, no self-uses."""
    out: dict[TypeDecl, None] = {}
    for chain in decl.uses:
        hit = resolve_chain(corpus, decl, chain)
        if hit is not None and hit is not decl:
            out.setdefault(hit, None)
    return list(out)


def import_targets(corpus: Corpus, unit: CompilationUnitFacts) -> list[str]:
    """Packages (labels) a unit's imports point at, when they resolve in the corpus."""
    out = []
    for imp in unit.imports:
        if imp.endswith(".*"):
            prefix = imp[:-2]
            if prefix in corpus.packages:
                out.append(prefix or DEFAULT_PACKAGE)
            elif prefix in corpus.types:
                out.append(corpus.type_index[prefix].package_label)
        elif imp in corpus.types:
            out.append(corpus.type_index[imp].package_label)
    return out


@derived
def type_dependency_graph(corpus: Corpus) -> DependencyGraph:
    """One back-linked component per declared type, one edge per distinct use."""
    dg = DependencyGraph(SourceRef(Frontend.JAVA_TYPES, "corpus", corpus))
    types = corpus.all_types()
    ids = dg.add_components([SourceRef(Frontend.JAVA_TYPES, d.qualified_name, d) for d in types])
    component_of = dict(zip(types, ids))
    dg.add_dependencies((c, component_of[u]) for d, c in component_of.items() for u in type_uses(corpus, d))
    return dg


def _package_edges(corpus: Corpus) -> dict[tuple[str, str], None]:
    edges: dict[tuple[str, str], None] = {}
    for unit in corpus.units:
        p = unit.package_label
        for t in unit.types:
            for u in type_uses(corpus, t):
                q = u.unit.package_label
                if q != p:
                    edges.setdefault((p, q), None)
        for q in import_targets(corpus, unit):
            if q != p:
                edges.setdefault((p, q), None)
    return edges


@derived
def package_dependency_graph(corpus: Corpus) -> DependencyGraph:
    """One labelled component per package; Java has no package node to link back to."""
    dg = DependencyGraph(SourceRef(Frontend.JAVA_PACKAGES, "corpus", corpus))
    labels = corpus.package_labels()
    component_of = dict(zip(labels, dg.add_components([None] * len(labels), labels)))
    dg.add_dependencies((component_of[p], component_of[q]) for p, q in _package_edges(corpus))
    return dg


def _kosaraju(nodes: list, adjacency: dict) -> list[list]:
    """Kosaraju over a plain adjacency map, building the reverse map inline."""
    reverse: dict = {n: [] for n in nodes}
    for a in nodes:
        for b in adjacency.get(a, ()):
            reverse[b].append(a)
    seen: set = set()
    order: list = []
    for root in nodes:
        if root in seen:
            continue
        seen.add(root)
        stack = [(root, iter(adjacency.get(root, ())))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, iter(adjacency.get(w, ()))))
                    break
            else:
                stack.pop()
                order.append(v)
    owner: dict = {}
    groups: list[list] = []
    for v in reversed(order):
        if v in owner:
            continue
        group = [v]
        owner[v] = group
        todo = [v]
        while todo:
            u = todo.pop()
            for w in reverse[u]:
                if w not in owner:
                    owner[w] = group
                    group.append(w)
                    todo.append(w)
        groups.append(group)
    return groups


def direct_package_scc(corpus: Corpus) -> list[list[str]]:
    """Package SCCs from an inline adjacency map, no overlay involved."""
    return _canonical_names(_raw_package_scc(corpus))


def _raw_package_scc(corpus: Corpus) -> list[list[str]]:
    adjacency: dict[str, set[str]] = {}
    for unit in corpus.units:
        p = unit.package_label
        targets = adjacency.setdefault(p, set())
        for t in unit.types:
            for u in type_uses(corpus, t):
                targets.add(u.unit.package_label)
        targets.update(import_targets(corpus, unit))
    for p, targets in adjacency.items():
        targets.discard(p)
    return _kosaraju(corpus.package_labels(), adjacency)


def direct_type_scc(corpus: Corpus) -> list[list[str]]:
    """Type SCCs computed straight from the scanned declarations."""
    decls = corpus.all_types()
    adjacency = {d: type_uses(corpus, d) for d in decls}
    groups = _kosaraju(decls, adjacency)
    return _canonical_names([[d.qualified_name for d in g] for g in groups])


def _canonical_names(groups: list[list[str]]) -> list[list[str]]:
    return sorted(sorted(g) for g in groups)


def overlay_partition(dg: DependencyGraph) -> list[list[str]]:
    return _canonical_names([[dg.name(v) for v in g] for g in scc(dg).groups])


def type_cycles(corpus: Corpus) -> list[CycleFinding]:
    return cycle_findings(type_dependency_graph(corpus))


def package_cycles(corpus: Corpus) -> list[CycleFinding]:
    return cycle_findings(package_dependency_graph(corpus))


def direct_type_cycles(corpus: Corpus) -> list[CycleFinding]:
    """Same findings as :func:`type_cycles`, without the overlay (self-uses are never edges)."""
    decls = corpus.all_types()
    adjacency = {d: type_uses(corpus, d) for d in decls}
    return canonical_cycles(
        [
            [CycleMember(d.qualified_name, SourceRef(Frontend.JAVA_TYPES, d.qualified_name, d)) for d in g]
            for g in _kosaraju(decls, adjacency)
            if len(g) > 1
        ]
    )


def direct_package_cycles(corpus: Corpus) -> list[CycleFinding]:
    return canonical_cycles(
        [[CycleMember(p, None) for p in g] for g in _raw_package_scc(corpus) if len(g) > 1]
    )
