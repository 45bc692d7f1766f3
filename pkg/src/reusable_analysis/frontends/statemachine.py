"""State-machine DSL: parser, relational AST, overlay mapping, direct baseline.

Concrete syntax::

    [final] state ID          -- declare a state
    ID -> ID : LABEL          -- transition; LABEL is an identifier or integer
    initial ID                -- exactly once

Items may be interleaved; ``//`` and ``/* */`` comments are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .._memo import derived
from ..errors import ParseError, ResolutionError
from ..findings import CycleFinding, CycleMember, canonical_cycles, cycle_findings
from ..kernel.graph import DependencyGraph
from ..lexing import Token, TokenStream, tokenize
from ..sourceref import Frontend, SourceRef, Span

KEYWORDS = frozenset({"state", "final", "initial"})


@dataclass(eq=False)
class State:
    label: str
    span: Span | None = None
    final: bool = False
    outgoing: list["Transition"] = field(default_factory=list, repr=False)
    incoming: list["Transition"] = field(default_factory=list, repr=False)


@dataclass(eq=False)
class Transition:
    label: str
    source: State = field(repr=False)
    target: State = field(repr=False)
    span: Span | None = None

    def __repr__(self) -> str:
        return f"Transition({self.source.label}->{self.target.label}:{self.label})"


@dataclass(eq=False)
class StateMachine:
    states: list[State]
    transitions: list[Transition]
    # None only for machines built without the parser and without states
    initial: State | None
    file: str = "<input>"
    span: Span | None = None

    @property
    def finals(self) -> list[State]:
        return [s for s in self.states if s.final]

    def state(self, label: str) -> State:
        for s in self.states:
            if s.label == label:
                return s
        raise KeyError(label)

    def structure(self) -> tuple:
        """Everything that identifies the machine, minus source positions."""
        return (
            tuple((s.label, s.final) for s in self.states),
            tuple((t.source.label, t.target.label, t.label) for t in self.transitions),
            self.initial.label if self.initial else None,
        )


def connect(source: State, target: State, label: str, span: Span | None = None) -> Transition:
    """Create a transition and register it on both end states."""
    t = Transition(label, source, target, span)
    source.outgoing.append(t)
    target.incoming.append(t)
    return t


def parse_state_machine(text: str, file: str = "<input>") -> StateMachine:
    ts = TokenStream(tokenize(text, file), file)
    declared: list[tuple[str, bool, Token, Span]] = []
    pending: list[tuple[Token, Token, str, Span]] = []
    initial: Token | None = None

    while not ts.at_eof():
        start = ts.current
        if ts.at("final") or ts.at("state"):
            is_final = ts.accept("final") is not None
            ts.expect("state")
            name = _state_id(ts)
            declared.append((name.value, is_final, name, ts.span_from(start)))
        elif ts.at("initial"):
            ts.advance()
            tok = _state_id(ts)
            if initial is not None:
                raise ParseError("duplicate initial clause", file, start.line, start.col)
            initial = tok
        elif start.kind == "ident":
            src = _state_id(ts)
            ts.expect("->")
            dst = _state_id(ts)
            ts.expect(":")
            ev = ts.current
            if ev.kind not in ("ident", "number") or ev.value in KEYWORDS:
                ts.fail("expected event label")
            ts.advance()
            pending.append((src, dst, ev.value, ts.span_from(start)))
        else:
            ts.fail("expected 'state', 'final', 'initial' or a transition")

    if initial is None:
        eof = ts.current
        raise ParseError("missing initial clause", file, eof.line, eof.col)

    states: dict[str, State] = {}
    for label, is_final, tok, span in declared:
        if label in states:
            raise ParseError(f"duplicate state {label!r}", file, tok.line, tok.col)
        states[label] = State(label, span, is_final)

    def resolve(tok: Token) -> State:
        try:
            return states[tok.value]
        except KeyError:
            raise ResolutionError(f"unresolved state {tok.value!r}", file, tok.line, tok.col) from None

    transitions = [connect(resolve(a), resolve(b), ev, span) for a, b, ev, span in pending]
    init = resolve(initial)
    whole = Span(file, 1, 1, ts.current.line, ts.current.col)
    return StateMachine(list(states.values()), transitions, init, file, whole)


def _state_id(ts: TokenStream) -> Token:
    tok = ts.current
    if tok.kind != "ident" or tok.value in KEYWORDS:
        ts.fail("expected state id")
    return ts.advance()


def to_source(machine: StateMachine) -> str:
    """Print in canonical order: states, transitions, initial clause."""
    lines = [("final " if s.final else "") + f"state {s.label}" for s in machine.states]
    lines += [f"{t.source.label}->{t.target.label}:{t.label}" for t in machine.transitions]
    lines.append(f"initial {machine.initial.label}")
    return "\n".join(lines) + "\n"


@derived
def dependency_graph(machine: StateMachine) -> DependencyGraph:
    """One component per state (back-linked), one edge per transition."""
    dg = DependencyGraph(SourceRef(Frontend.SM, machine.file, machine))
    states = machine.states
    ids = dg.add_components([SourceRef(Frontend.SM, s.label, s) for s in states])
    component_of = dict(zip(states, ids))
    dg.add_dependencies([(component_of[t.source], component_of[t.target]) for t in machine.transitions])
    return dg


def direct_scc(machine: StateMachine) -> list[list[State]]:
    """Kosaraju woven into the state-machine types, without any overlay.

    Forward pass follows outgoing transitions to their targets, backward pass
    follows incoming transitions to their sources.
    """
    visited: dict[State, list[State] | None] = {}
    locked: list[State] = []
    for s in machine.states:
        if s in visited:
            continue
        visited[s] = None
        stack = [(s, iter(s.outgoing))]
        while stack:
            state, it = stack[-1]
            for t in it:
                if t.target not in visited:
                    visited[t.target] = None
                    stack.append((t.target, iter(t.target.outgoing)))
                    break
            else:
                stack.pop()
                locked.append(state)

    result: list[list[State]] = []
    for s in reversed(locked):
        if visited[s] is not None:
            continue
        root: list[State] = [s]
        visited[s] = root
        todo = [s]
        while todo:
            state = todo.pop()
            for t in state.incoming:
                if visited[t.source] is None:
                    visited[t.source] = root
                    root.append(t.source)
                    todo.append(t.source)
        result.append(root)
    return result


def cycle_report(machine: StateMachine) -> list[CycleFinding]:
    """Nontrivial SCCs of the overlay graph, mapped back to states."""
    return cycle_findings(dependency_graph(machine))


def direct_cycle_report(machine: StateMachine) -> list[CycleFinding]:
    """Same findings as :func:`cycle_report`, computed by :func:`direct_scc`."""
    cycles = []
    for group in direct_scc(machine):
        if len(group) > 1 or any(t.target is group[0] for t in group[0].outgoing):
            cycles.append([CycleMember(s.label, SourceRef(Frontend.SM, s.label, s)) for s in group])
    return canonical_cycles(cycles)

