"""Modelica-lite: nested ``model ... end Name;`` classes and their scope tree.

The mapping follows a three-part template:

* constructors (:func:`_class_scope`, :func:`_component_declaration`) that
  create one overlay node per source node and set its back-link;
* helper attributes (:func:`containing_class`) for navigation;
* the mapping attribute :func:`scope_tree`, which populates all scopes first
  and only then adds inheritance links for every ``extends`` clause.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .._memo import derived
from ..errors import ParseError, ResolutionError
from ..kernel.scope import Declaration, Scope, ScopeTree, link_inherited
from ..lexing import TokenStream, tokenize
from ..sourceref import Frontend, SourceRef, Span

PREFIXES = frozenset(
    "constant parameter discrete input output flow stream inner outer final replaceable redeclare".split()
)
_CLASS_PREFIXES = frozenset({"partial", "encapsulated"})
_SECTION_KEYWORDS = frozenset({"equation", "algorithm"})


@dataclass(eq=False)
class MlComponent:
    type_name: str
    name: str
    span: Span
    prefixes: tuple[str, ...] = ()
    initializer: str | None = None

    @property
    def constant(self) -> bool:
        return "constant" in self.prefixes


@dataclass(eq=False)
class MlExtends:
    name: str
    span: Span


MlElement = Union[MlComponent, MlExtends, "MlClass"]


@dataclass(eq=False)
class MlClass:
    name: str
    span: Span
    elements: list[MlElement] = field(default_factory=list, repr=False)
    enclosing: "MlClass | None" = field(default=None, repr=False)

    @property
    def components(self) -> list[MlComponent]:
        return [e for e in self.elements if isinstance(e, MlComponent)]

    @property
    def classes(self) -> list["MlClass"]:
        return [e for e in self.elements if isinstance(e, MlClass)]

    @property
    def extends(self) -> list[MlExtends]:
        return [e for e in self.elements if isinstance(e, MlExtends)]


def parse_mlite(text: str, file: str = "<input>") -> MlClass:
    ts = TokenStream(tokenize(text, file), file)
    if ts.accept("within"):
        while not ts.accept(";"):
            if ts.at_eof():
                ts.fail("expected ';'")
            ts.advance()
    model = _class_def(ts, None)
    if not ts.at_eof():
        ts.fail("expected end of input")
    return model


def _class_def(ts: TokenStream, enclosing: MlClass | None) -> MlClass:
    start = ts.current
    while ts.current.value in _CLASS_PREFIXES:
        ts.advance()
    ts.expect("model")
    name = ts.expect_ident("model name")
    cls = MlClass(name.value, ts.span_from(start), enclosing=enclosing)
    if ts.current.kind == "string":
        ts.advance()
    while not ts.at("end"):
        if ts.at_eof():
            ts.fail(f"missing 'end {cls.name};'")
        _element(ts, cls)
    ts.expect("end")
    closing = ts.expect_ident("model name after 'end'")
    if closing.value != cls.name:
        raise ParseError(
            f"'end {closing.value}' does not match 'model {cls.name}'", ts.file, closing.line, closing.col
        )
    ts.expect(";")
    cls.span = ts.span_from(start)
    return cls


def _element(ts: TokenStream, cls: MlClass) -> None:
    tok = ts.current
    if tok.value in ("public", "protected", ";"):
        ts.advance()
        return
    if tok.value in _SECTION_KEYWORDS or (tok.value == "initial" and ts.peek(1).value in _SECTION_KEYWORDS):
        _skip_section(ts, cls.name)
        return
    if tok.value == "extends":
        ts.advance()
        first = ts.current
        name = _dotted(ts)
        if ts.at("("):
            _skip_balanced(ts)
        cls.elements.append(MlExtends(name, ts.span_from(first)))
        ts.expect(";")
        return
    if tok.value == "model" or tok.value in _CLASS_PREFIXES:
        cls.elements.append(_class_def(ts, cls))
        return
    _component_clause(ts, cls)


def _component_clause(ts: TokenStream, cls: MlClass) -> None:
    prefixes = []
    while ts.current.kind == "ident" and ts.current.value in PREFIXES:
        prefixes.append(ts.advance().value)
    type_name = _dotted(ts)
    if ts.at("["):
        _skip_balanced(ts)
    while True:
        name = ts.expect_ident("component name")
        if ts.at("["):
            _skip_balanced(ts)
        if ts.at("("):
            _skip_balanced(ts)
        initializer = None
        if ts.accept("="):
            initializer = _opaque_until(ts, (",", ";"))
        if ts.current.kind == "string":
            ts.advance()
        cls.elements.append(MlComponent(type_name, name.value, name.span(ts.file), tuple(prefixes), initializer))
        if not ts.accept(","):
            break
    ts.expect(";")


def _dotted(ts: TokenStream) -> str:
    ts.accept(".")
    parts = [ts.expect_ident("type name").value]
    while ts.at(".") and ts.peek(1).kind == "ident":
        ts.advance()
        parts.append(ts.advance().value)
    return ".".join(parts)


def _opaque_until(ts: TokenStream, stop: tuple[str, ...]) -> str:
    parts: list[str] = []
    depth = 0
    while True:
        tok = ts.current
        if tok.kind == "eof":
            ts.fail("unexpected end of input in expression")
        if depth == 0 and tok.kind == "op" and tok.value in stop:
            if not parts:
                ts.fail("expected expression")
            return " ".join(parts)
        if tok.value in ("(", "[", "{") and tok.kind == "op":
            depth += 1
        elif tok.value in (")", "]", "}") and tok.kind == "op":
            depth -= 1
        parts.append(tok.value)
        ts.advance()


def _skip_balanced(ts: TokenStream) -> None:
    opener = ts.advance()
    depth = 1
    while depth:
        tok = ts.current
        if tok.kind == "eof":
            ts.fail(f"unclosed {opener.value!r}", opener)
        if tok.kind == "op" and tok.value in ("(", "[", "{"):
            depth += 1
        elif tok.kind == "op" and tok.value in (")", "]", "}"):
            depth -= 1
        ts.advance()


def _skip_section(ts: TokenStream, class_name: str) -> None:
    # equations are out of scope: skip to the enclosing `end <class_name>;`
    while not (ts.at("end") and ts.peek(1).value == class_name and ts.at(";", 2)):
        if ts.at_eof():
            ts.fail(f"missing 'end {class_name};'")
        ts.advance()


# --- constructors -----------------------------------------------------------


def _ref(key: str, node: object) -> SourceRef:
    return SourceRef(Frontend.MLITE, key, node)


def _qualified(cls: MlClass) -> str:
    parts = []
    c: MlClass | None = cls
    while c is not None:
        parts.append(c.name)
        c = c.enclosing
    return ".".join(reversed(parts))


def _class_scope(cls: MlClass) -> Scope:
    return Scope("class", cls.name, _ref(_qualified(cls), cls))


def _component_declaration(comp: MlComponent, owner: MlClass) -> Declaration:
    return Declaration(comp.name, _ref(f"{_qualified(owner)}.{comp.name}", comp), constant=comp.constant)


# --- helper attributes -------------------------------------------------------


def containing_class(element: MlClass) -> MlClass | None:
    return element.enclosing


def resolve_extends(name: str, site: MlClass) -> MlClass | None:
    """Lexical lookup of an extends target: innermost enclosing class first."""
    head, *rest = name.split(".")
    found = None
    scope = containing_class(site)
    while scope is not None and found is None:
        found = next((c for c in scope.classes if c.name == head), None)
        if found is None and containing_class(scope) is None and scope.name == head:
            found = scope
        scope = containing_class(scope)
    for part in rest:
        if found is None:
            return None
        found = next((c for c in found.classes if c.name == part), None)
    return found


# --- mapping attribute -------------------------------------------------------


@derived
def scope_tree(model: MlClass) -> ScopeTree:
    tree = ScopeTree(_ref(model.span.file, model))
    scope_of: dict[MlClass, Scope] = {}

    def populate(parent: Scope, cls: MlClass) -> None:
        scope = _class_scope(cls)
        parent.add(scope)
        scope_of[cls] = scope
        tree.trace.append(("scope", scope.path))
        for e in cls.elements:
            if isinstance(e, MlComponent):
                scope.add(_component_declaration(e, cls))
            elif isinstance(e, MlClass):
                populate(scope, e)

    populate(tree.root, model)

    for cls, scope in scope_of.items():
        for ext in cls.extends:
            target = resolve_extends(ext.name, cls)
            if target is None:
                raise ResolutionError(
                    f"unresolved extends target {ext.name!r} in {cls.name}",
                    ext.span.file,
                    ext.span.line_start,
                    ext.span.col_start,
                )
            link_inherited(scope, scope_of[target])
            tree.trace.append(("inherit", scope.path))
    return tree
