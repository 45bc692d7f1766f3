"""Domain-independent scope tree with inheritance links, plus shadowing.

Lookup for a declaration ``d`` in scope ``s``:

1. other declarations directly in ``s`` with the same name;
2. each scope ``s`` inherits from, by this same procedure (which, once it
   fails locally, continues outward from *that* scope's enclosing scope);
3. the enclosing scope of ``s``, by this same procedure, stopping at the root.

A scope already searched during one lookup is skipped; revisiting could only
repeat a failed search (diamond inheritance) or loop forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .._memo import derived
from ..errors import InheritanceCycleError, StructureError
from ..sourceref import SourceRef


class Element:
    __slots__ = ("parent", "__weakref__")

    def __init__(self) -> None:
        self.parent: Scope | None = None


class Declaration(Element):
    __slots__ = ("name", "backlink", "constant")

    def __init__(self, name: str, backlink: SourceRef | None = None, constant: bool = False) -> None:
        super().__init__()
        if not name:
            raise StructureError("declaration name must be non-empty")
        self.name = name
        self.backlink = backlink
        self.constant = constant

    def __repr__(self) -> str:
        where = f" @ {self.backlink.span}" if self.backlink and self.backlink.span else ""
        return f"Declaration({self.name!r}{where})"


class Scope(Element):
    __slots__ = ("kind", "name", "elements", "inherited", "backlink")

    def __init__(self, kind: str = "scope", name: str = "", backlink: SourceRef | None = None) -> None:
        super().__init__()
        self.kind = kind
        self.name = name
        self.elements: list[Element] = []
        self.inherited: list[Scope] = []
        self.backlink = backlink

    @property
    def is_root(self) -> bool:
        return False

    def add(self, element: Element) -> Element:
        if element.parent is not None:
            raise StructureError(f"{element!r} already belongs to a scope")
        if isinstance(element, RootScope):
            raise StructureError("a root scope cannot be nested")
        element.parent = self
        self.elements.append(element)
        return element

    def declare(self, name: str, backlink: SourceRef | None = None, constant: bool = False) -> Declaration:
        decl = Declaration(name, backlink, constant)
        self.add(decl)
        return decl

    def nest(self, kind: str, name: str, backlink: SourceRef | None = None) -> "Scope":
        scope = Scope(kind, name, backlink)
        self.add(scope)
        return scope

    @property
    def declarations(self) -> Iterator[Declaration]:
        return (e for e in self.elements if isinstance(e, Declaration))

    @property
    def scopes(self) -> Iterator["Scope"]:
        return (e for e in self.elements if isinstance(e, Scope))

    def root(self) -> "RootScope | None":
        s: Scope = self
        while s.parent is not None:
            s = s.parent
        return s if isinstance(s, RootScope) else None

    @property
    def path(self) -> str:
        parts = []
        s: Scope | None = self
        while s is not None and not s.is_root:
            parts.append(s.name)
            s = s.parent
        return ".".join(reversed(parts))

    def __repr__(self) -> str:
        return f"Scope({self.kind}, {self.path!r})"


class RootScope(Scope):
    __slots__ = ()

    def __init__(self, backlink: SourceRef | None = None) -> None:
        super().__init__("root", "", backlink)

    @property
    def is_root(self) -> bool:
        return True


class ScopeTree:
    """Owner of exactly one :class:`RootScope`."""

    def __init__(self, backlink: SourceRef | None = None) -> None:
        self.root = RootScope(backlink)
        self.backlink = backlink
        # (event, scope path) pairs recorded by frontends that build in phases
        self.trace: list[tuple[str, str]] = []

    def __repr__(self) -> str:
        return f"ScopeTree({sum(1 for _ in self.declarations())} declarations)"

    def walk(self) -> Iterator[Element]:
        """All elements below the root, depth-first in document order."""
        stack: list[Element] = list(reversed(self.root.elements))
        while stack:
            e = stack.pop()
            yield e
            if isinstance(e, Scope):
                stack.extend(reversed(e.elements))

    def declarations(self) -> Iterator[Declaration]:
        return (e for e in self.walk() if isinstance(e, Declaration))

    def scopes(self) -> Iterator[Scope]:
        return (e for e in self.walk() if isinstance(e, Scope))


def link_inherited(scope: Scope, super_scope: Scope) -> None:
    """Record that ``scope`` inherits the declarations of ``super_scope``."""
    root = scope.root()
    if root is None or super_scope.root() is not root:
        raise StructureError("inheritance links must stay within one scope tree")
    cycle = _path_via_inherited(super_scope, scope)
    if cycle is not None:
        members = [scope] + cycle
        names = " -> ".join(s.path or s.kind for s in members)
        raise InheritanceCycleError(f"inheritance cycle: {names}", members)
    scope.inherited.append(super_scope)


def _path_via_inherited(start: Scope, goal: Scope) -> list[Scope] | None:
    seen: set[int] = set()
    stack: list[tuple[Scope, list[Scope]]] = [(start, [start])]
    while stack:
        s, path = stack.pop()
        if s is goal:
            return path
        if id(s) in seen:
            continue
        seen.add(id(s))
        for t in s.inherited:
            stack.append((t, path + [t]))
    return None


def _shadowed_locally(scope: Scope, shadower: Declaration, visited: set[int]) -> Declaration | None:
    if id(scope) in visited:
        return None
    visited.add(id(scope))
    name = shadower.name
    for decl in scope.declarations:
        if decl is not shadower and decl.name == name:
            return decl
    for inherited in scope.inherited:
        found = _shadowed_locally(inherited, shadower, visited)
        if found is not None:
            return found
    if scope.is_root or scope.parent is None:
        return None
    return _shadowed_locally(scope.parent, shadower, visited)


def shadowed(decl: Declaration) -> Declaration | None:
    """The declaration ``decl`` hides, or None."""
    if decl.parent is None or decl.parent.root() is None:
        raise StructureError(f"{decl!r} is not attached to a scope tree")
    return _shadowed_locally(decl.parent, decl, set())


@dataclass(frozen=True)
class ShadowFinding:
    shadower: Declaration
    shadowed: Declaration
    # both declarations sit directly in the same scope (a redeclaration)
    same_scope: bool

    @property
    def name(self) -> str:
        return self.shadower.name


@derived
def variable_shadowings(tree: ScopeTree) -> tuple[ShadowFinding, ...]:
    """Every shadowing in ``tree``, in document order of the shadower.

    Memoized per tree: the body runs once no matter how often it is asked.
    """
    findings = []
    for decl in tree.declarations():
        hidden = shadowed(decl)
        if hidden is not None:
            findings.append(ShadowFinding(decl, hidden, hidden.parent is decl.parent))
    return tuple(findings)
