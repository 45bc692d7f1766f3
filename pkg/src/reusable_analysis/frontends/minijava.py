"""A Java subset big enough for field/parameter/local shadowing, and its scope tree.

Recognized: classes (nested and local) with ``extends``/``implements``,
fields with initializers, methods and constructors with parameters, local
variables (including ``for``, ``catch`` and try-with-resources variables).
Expressions are skipped by bracket balancing; blocks are flattened into the
enclosing method.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .._memo import derived
from ..errors import ResolutionError
from ..kernel.scope import Scope, ScopeTree, link_inherited
from ..lexing import Token, TokenStream, tokenize
from ..sourceref import Frontend, SourceRef, Span

MODIFIERS = frozenset(
    """public protected private static final abstract synchronized native
    transient volatile strictfp default sealed""".split()
)
_TYPE_ARG_TOKENS = frozenset({".", ",", "?", "<", ">", "[", "]", "&", "extends", "super"})
_CONSTRUCTOR = "<init>"


@dataclass(eq=False)
class MjVar:
    name: str
    kind: str  # field, param, local
    span: Span


@dataclass(eq=False)
class MjMethod:
    name: str
    span: Span
    parameters: list[MjVar] = field(default_factory=list)
    locals: list[MjVar] = field(default_factory=list)
    classes: list["MjClass"] = field(default_factory=list, repr=False)

    @property
    def is_constructor(self) -> bool:
        return self.name == _CONSTRUCTOR


MjMember = Union[MjVar, MjMethod, "MjClass"]


@dataclass(eq=False)
class MjClass:
    name: str
    span: Span
    superclass: str | None = None
    superclass_span: Span | None = None
    members: list[MjMember] = field(default_factory=list, repr=False)

    @property
    def fields(self) -> list[MjVar]:
        return [m for m in self.members if isinstance(m, MjVar)]

    @property
    def methods(self) -> list[MjMethod]:
        return [m for m in self.members if isinstance(m, MjMethod)]

    @property
    def classes(self) -> list["MjClass"]:
        return [m for m in self.members if isinstance(m, MjClass)]


@dataclass(eq=False)
class MjProgram:
    """Parse result: top-level classes, possibly from several files."""

    classes: list[MjClass]
    files: list[str] = field(default_factory=list)

    @classmethod
    def merge(cls, programs: Iterable["MjProgram"]) -> "MjProgram":
        classes: list[MjClass] = []
        files: list[str] = []
        for p in programs:
            classes.extend(p.classes)
            files.extend(p.files)
        return cls(classes, files)


def parse_minijava(text: str, file: str = "<input>") -> MjProgram:
    p = _Parser(TokenStream(tokenize(text, file), file))
    return MjProgram(p.compilation_unit(), [file])


class _Parser:
    def __init__(self, ts: TokenStream) -> None:
        self.ts = ts

    def compilation_unit(self) -> list[MjClass]:
        ts = self.ts
        classes = []
        while not ts.at_eof():
            if ts.accept(";"):
                continue
            if ts.at("package") or ts.at("import"):
                self.skip_to_semicolon()
                continue
            self.modifiers()
            classes.append(self.class_decl())
        return classes

    def modifiers(self) -> None:
        ts = self.ts
        while True:
            if ts.current.kind == "ident" and ts.current.value in MODIFIERS and not ts.at("(", 1):
                ts.advance()
            elif ts.at("@") and not ts.at("interface", 1):
                ts.advance()
                self.qualified_name()
                if ts.at("("):
                    self.skip_balanced()
            else:
                return

    def qualified_name(self) -> list[Token]:
        ts = self.ts
        parts = [ts.expect_ident()]
        while ts.at(".") and ts.peek(1).kind == "ident":
            ts.advance()
            parts.append(ts.advance())
        return parts

    def class_decl(self) -> MjClass:
        ts = self.ts
        start = ts.expect("class")
        name = ts.expect_ident("class name")
        cls = MjClass(name.value, ts.span_from(start))
        if ts.at("<"):
            self.type_arguments()
        if ts.accept("extends"):
            first = ts.current
            parts = self.type_ref()
            cls.superclass = ".".join(parts)
            cls.superclass_span = ts.span_from(first)
        if ts.accept("implements"):
            self.type_ref()
            while ts.accept(","):
                self.type_ref()
        ts.expect("{")
        while not ts.accept("}"):
            if ts.at_eof():
                ts.fail(f"unterminated class {cls.name}")
            self.member(cls)
        return cls

    def member(self, cls: MjClass) -> None:
        ts = self.ts
        if ts.accept(";"):
            return
        self.modifiers()
        start = ts.current
        if ts.at("class"):
            cls.members.append(self.class_decl())
            return
        if ts.at("{"):
            # initializer block: its locals get their own method-like scope
            method = MjMethod("<block>", start.span(ts.file))
            self.block(method)
            method.span = ts.span_from(start)
            cls.members.append(method)
            return
        if ts.at("<"):
            self.type_arguments()
        if ts.current.value == cls.name and ts.at("(", 1):
            ts.advance()
            method = MjMethod(_CONSTRUCTOR, ts.span_from(start))
            self.method_rest(method)
            cls.members.append(method)
            return
        self.type_ref()
        name = ts.expect_ident("member name")
        if ts.at("("):
            method = MjMethod(name.value, ts.span_from(start))
            self.method_rest(method)
            cls.members.append(method)
            return
        cls.members.extend(self.declarators(name, "field"))
        ts.expect(";")

    def method_rest(self, method: MjMethod) -> None:
        ts = self.ts
        ts.expect("(")
        if not ts.at(")"):
            method.parameters.append(self.parameter())
            while ts.accept(","):
                method.parameters.append(self.parameter())
        ts.expect(")")
        while ts.accept("[") and ts.expect("]"):
            pass
        if ts.accept("throws"):
            self.type_ref()
            while ts.accept(","):
                self.type_ref()
        if not ts.accept(";"):
            if ts.at("default"):
                self.skip_to_semicolon()
            else:
                self.block(method)

    def parameter(self) -> MjVar:
        ts = self.ts
        self.modifiers()
        self.type_ref()
        ts.accept("...")
        name = ts.expect_ident("parameter name")
        while ts.accept("[") and ts.expect("]"):
            pass
        return MjVar(name.value, "param", name.span(ts.file))

    def type_ref(self) -> list[str]:
        ts = self.ts
        parts = [ts.expect_ident("type").value]
        if ts.at("<"):
            self.type_arguments()
        while ts.at(".") and ts.peek(1).kind == "ident":
            ts.advance()
            parts.append(ts.advance().value)
            if ts.at("<"):
                self.type_arguments()
        while ts.at("[") and ts.at("]", 1):
            ts.advance()
            ts.advance()
        return parts

    def type_arguments(self) -> None:
        ts = self.ts
        depth = 0
        while True:
            tok = ts.current
            if tok.value == "<":
                depth += 1
            elif tok.value == ">":
                depth -= 1
            elif tok.kind != "ident" and tok.value not in _TYPE_ARG_TOKENS:
                ts.fail("malformed type arguments")
            ts.advance()
            if depth == 0:
                return

    def declarators(self, first: Token, kind: str) -> list[MjVar]:
        ts = self.ts
        out = [MjVar(first.value, kind, first.span(ts.file))]
        self.declarator_rest()
        while ts.accept(","):
            name = ts.expect_ident("variable name")
            out.append(MjVar(name.value, kind, name.span(ts.file)))
            self.declarator_rest()
        return out

    def declarator_rest(self) -> None:
        ts = self.ts
        while ts.at("[") and ts.at("]", 1):
            ts.advance()
            ts.advance()
        if ts.accept("="):
            self.skip_expression(stop=(",", ";", ")", ":"))

    def looks_like_local(self) -> bool:
        """Speculatively match ``Type Ident`` followed by a declarator continuation."""
        ts = self.ts
        saved = ts.pos
        try:
            if ts.current.kind != "ident" or ts.current.value in ("return", "new", "throw", "yield"):
                return False
            self.type_ref()
            if ts.current.kind != "ident":
                return False
            nxt = ts.peek(1)
            return nxt.value in ("=", ";", ",", "[", ":", ")")
        except Exception:
            return False
        finally:
            ts.pos = saved

    def block(self, method: MjMethod) -> None:
        ts = self.ts
        ts.expect("{")
        while not ts.accept("}"):
            if ts.at_eof():
                ts.fail("unterminated block")
            self.statement(method)

    def statement(self, method: MjMethod) -> None:
        ts = self.ts
        tok = ts.current
        if ts.at("{"):
            self.block(method)
        elif ts.accept(";"):
            pass
        elif tok.value in ("if", "while", "switch", "synchronized") and ts.at("(", 1):
            ts.advance()
            self.skip_balanced()
            if tok.value == "switch":
                self.switch_body(method)
                return
            self.statement(method)
            if tok.value == "if" and ts.accept("else"):
                self.statement(method)
        elif tok.value == "do":
            ts.advance()
            self.statement(method)
            ts.expect("while")
            self.skip_balanced()
            ts.expect(";")
        elif tok.value == "for":
            ts.advance()
            self.paren_declaration(method)
            self.statement(method)
        elif tok.value == "try":
            ts.advance()
            if ts.at("("):
                self.paren_declaration(method)
            self.block(method)
            while ts.at("catch"):
                ts.advance()
                self.paren_declaration(method)
                self.block(method)
            if ts.accept("finally"):
                self.block(method)
        elif tok.kind == "ident" and ts.at(":", 1) and tok.value != "default":
            ts.advance()
            ts.advance()
            self.statement(method)
        else:
            self.modifiers()
            if ts.at("class"):
                method.classes.append(self.class_decl())
                return
            if self.looks_like_local():
                self.type_ref()
                name = ts.expect_ident()
                method.locals.extend(self.declarators(name, "local"))
                ts.expect(";")
            else:
                self.skip_expression(stop=(";",))
                ts.expect(";")

    def switch_body(self, method: MjMethod) -> None:
        ts = self.ts
        ts.expect("{")
        while not ts.accept("}"):
            if ts.at_eof():
                ts.fail("unterminated switch")
            if ts.at("case") or (ts.at("default") and (ts.at(":", 1) or ts.at("->", 1))):
                ts.advance()
                self.skip_expression(stop=(":", "->"))
                ts.advance()
            else:
                self.statement(method)

    def paren_declaration(self, method: MjMethod) -> None:
        """``( ... )`` of for/catch/try: record variables declared at its start."""
        ts = self.ts
        ts.expect("(")
        while not ts.accept(")"):
            if ts.at_eof():
                ts.fail("unterminated parenthesis")
            self.modifiers()
            if self.looks_like_local():
                self.type_ref()
                while ts.accept("|"):
                    self.type_ref()
                name = ts.expect_ident()
                method.locals.extend(self.declarators(name, "local"))
            elif ts.current.kind == "ident" and ts.at("|", 1):
                # multi-catch: A | B e
                self.type_ref()
                while ts.accept("|"):
                    self.type_ref()
                name = ts.expect_ident()
                method.locals.append(MjVar(name.value, "local", name.span(ts.file)))
            else:
                self.skip_expression(stop=(";", ":", ")"))
            if ts.at(";") or ts.at(":"):
                ts.advance()

    def skip_balanced(self) -> None:
        ts = self.ts
        pairs = {"(": ")", "[": "]", "{": "}"}
        opener = ts.current
        if opener.value not in pairs:
            ts.fail("expected bracket")
        stack = [pairs[ts.advance().value]]
        while stack:
            tok = ts.current
            if tok.kind == "eof":
                ts.fail(f"unclosed {opener.value!r}", opener)
            if tok.kind == "op" and tok.value in pairs:
                stack.append(pairs[tok.value])
            elif tok.kind == "op" and tok.value in (")", "]", "}"):
                if tok.value != stack[-1]:
                    ts.fail("mismatched bracket")
                stack.pop()
            ts.advance()

    def skip_expression(self, stop: tuple[str, ...]) -> None:
        ts = self.ts
        while True:
            tok = ts.current
            if tok.kind == "eof":
                ts.fail("unexpected end of input in expression")
            if tok.kind == "op" and tok.value in stop:
                return
            if tok.kind == "op" and tok.value in ("(", "[", "{"):
                self.skip_balanced()
            elif tok.kind == "op" and tok.value in (")", "]", "}"):
                ts.fail("unbalanced bracket")
            else:
                ts.advance()

    def skip_to_semicolon(self) -> None:
        self.skip_expression(stop=(";",))
        self.ts.expect(";")


def _ref(key: str, node: object) -> SourceRef:
    return SourceRef(Frontend.MINIJAVA, key, node)


@derived
def scope_tree(program: MjProgram) -> ScopeTree:
    """Root -> class scopes -> (fields, method scopes, nested class scopes).

    ``extends`` clauses become inheritance links in a second pass, once every
    class scope exists.
    """
    tree = ScopeTree(_ref("program", program))
    scope_of: dict[MjClass, Scope] = {}
    enclosing_of: dict[MjClass, MjClass | None] = {}

    def add_class(parent: Scope, cls: MjClass, outer: MjClass | None) -> None:
        key = f"{parent.path}.{cls.name}" if parent.path else cls.name
        scope = parent.nest("class", cls.name, _ref(key, cls))
        scope_of[cls] = scope
        enclosing_of[cls] = outer
        tree.trace.append(("scope", scope.path))
        for m in cls.members:
            if isinstance(m, MjVar):
                scope.declare(m.name, _ref(f"{key}.{m.name}", m))
            elif isinstance(m, MjClass):
                add_class(scope, m, cls)
            else:
                method = scope.nest("method", m.name, _ref(f"{key}.{m.name}", m))
                tree.trace.append(("scope", method.path))
                for v in m.parameters + m.locals:
                    method.declare(v.name, _ref(f"{method.path}.{v.name}", v))
                for local in m.classes:
                    add_class(method, local, cls)

    for cls in program.classes:
        add_class(tree.root, cls, None)

    for cls, scope in scope_of.items():
        if cls.superclass is None:
            continue
        target = _resolve_class(cls.superclass, enclosing_of[cls], program, enclosing_of)
        if target is None:
            span = cls.superclass_span
            raise ResolutionError(
                f"unresolved superclass {cls.superclass!r} of {cls.name}",
                span.file if span else None,
                span.line_start if span else None,
                span.col_start if span else None,
            )
        link_inherited(scope, scope_of[target])
        tree.trace.append(("inherit", scope.path))
    return tree


def _resolve_class(
    name: str,
    outer: MjClass | None,
    program: MjProgram,
    enclosing_of: dict[MjClass, MjClass | None],
) -> MjClass | None:
    head, *rest = name.split(".")
    found = None
    scope = outer
    while scope is not None and found is None:
        if scope.name == head:
            found = scope
        else:
            found = next((c for c in scope.classes if c.name == head), None)
        scope = enclosing_of.get(scope)
    if found is None:
        found = next((c for c in program.classes if c.name == head), None)
    for part in rest:
        if found is None:
            return None
        found = next((c for c in found.classes if c.name == part), None)
    return found
