import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from reusable_analysis.errors import ParseError, ResolutionError
from reusable_analysis.frontends.statemachine import (
    State,
    StateMachine,
    connect,
    cycle_report,
    dependency_graph,
    direct_cycle_report,
    direct_scc,
    parse_state_machine,
    to_source,
)
from reusable_analysis.kernel.graph import groups_by_name, scc


def load(fixtures, name):
    path = fixtures / name
    return parse_state_machine(path.read_text(), name)


def test_three_cycles_parses_with_all_parts(fixtures):
    m = load(fixtures, "three_cycles.sm")
    assert [s.label for s in m.states] == list("ABCDGEF")
    assert [s.label for s in m.finals] == ["E", "F"]
    assert m.initial.label == "A"
    assert len(m.transitions) == 12
    assert m.state("C").outgoing[0].target is m.state("E")


def test_three_cycles_partition_and_findings(fixtures):
    m = load(fixtures, "three_cycles.sm")
    dg = dependency_graph(m)
    assert groups_by_name(scc(dg).groups, dg) == {
        frozenset("AF"), frozenset("BCE"), frozenset("D"), frozenset("G")
    }
    assert [f.labels for f in cycle_report(m)] == [["A", "F"], ["B", "C", "E"], ["G"]]


def test_findings_carry_spans_through_backlinks(fixtures):
    m = load(fixtures, "three_cycles.sm")
    by_name = {mem.name: mem for f in cycle_report(m) for mem in f.members}
    assert by_name["A"].ref.resolve() is m.state("A")
    assert (by_name["A"].span.line_start, by_name["A"].span.col_start) == (1, 1)
    assert (by_name["G"].span.line_start, by_name["G"].span.col_start) == (2, 1)
    assert by_name["F"].span.file == "three_cycles.sm"


def test_empty_machine_has_no_cycles(fixtures):
    m = load(fixtures, "empty_machine.sm")
    assert cycle_report(m) == []
    assert direct_cycle_report(m) == []


def test_programmatic_empty_machine():
    m = StateMachine([], [], None)
    assert cycle_report(m) == [] and direct_scc(m) == []
    assert m.structure() == ((), (), None)


def test_interleaved_items_and_comments():
    m = parse_state_machine("/* x */ state A\nA->A:go // loop\ninitial A\nfinal state B\n")
    assert [s.label for s in m.states] == ["A", "B"]
    assert [f.labels for f in cycle_report(m)] == [["A"]]


@pytest.mark.parametrize(
    "text, error, where",
    [
        ("state A\n", ParseError, (2, 1)),
        ("state A\ninitial A\ninitial A\n", ParseError, (3, 1)),
        ("state A\nstate A\ninitial A\n", ParseError, (2, 7)),
        ("state A\nA->B:x\ninitial A\n", ResolutionError, (2, 4)),
        ("state A\ninitial Z\n", ResolutionError, (2, 9)),
        ("state A\nA->A\ninitial A\n", ParseError, (3, 1)),
        ("state state\ninitial A\n", ParseError, (1, 7)),
        ("state A\n# nope\ninitial A\n", ParseError, (2, 1)),
        ("state A /* open\ninitial A\n", ParseError, (1, 9)),
    ],
)
def test_errors_point_at_source(text, error, where):
    with pytest.raises(error) as info:
        parse_state_machine(text, "bad.sm")
    assert (info.value.line, info.value.col) == where
    assert str(info.value).startswith(f"bad.sm:{where[0]}:{where[1]}: ")


@st.composite
def machines(draw):
    n = draw(st.integers(1, 8))
    labels = [f"S{i}" for i in range(n)]
    finals = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    states = [State(label, final=f) for label, f in zip(labels, finals)]
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.sampled_from(["0", "1", "go"])), max_size=20))
    transitions = [connect(states[a], states[b], ev) for a, b, ev in edges]
    return StateMachine(states, transitions, states[draw(st.integers(0, n - 1))])


@given(machines())
def test_print_parse_round_trip(m):
    again = parse_state_machine(to_source(m))
    assert again.structure() == m.structure()
    assert to_source(again) == to_source(m)


def random_machine(rng: random.Random) -> StateMachine:
    n = rng.randint(1, 25)
    states = [State(f"q{i}", final=rng.random() < 0.2) for i in range(n)]
    for _ in range(rng.randint(0, 3 * n)):
        connect(rng.choice(states), rng.choice(states), str(rng.randrange(2)))
    transitions = [t for s in states for t in s.outgoing]
    return StateMachine(states, transitions, states[0])


@pytest.mark.slow
def test_direct_and_overlay_agree_on_random_machines():
    rng = random.Random(99)
    mismatches = 0
    for _ in range(1000):
        m = random_machine(rng)
        if direct_cycle_report(m) != cycle_report(m):
            mismatches += 1
    assert mismatches == 0


def test_overlay_built_once_per_machine(fixtures):
    m = load(fixtures, "three_cycles.sm")
    dependency_graph.cache_clear()
    before = dependency_graph.constructions
    graphs = {id(dependency_graph(m)) for _ in range(100)}
    reports = [cycle_report(m) for _ in range(100)]
    assert len(graphs) == 1
    assert dependency_graph.constructions == before + 1
    assert all(r == reports[0] for r in reports)


def test_separate_machines_get_separate_overlays(fixtures):
    a = load(fixtures, "three_cycles.sm")
    b = load(fixtures, "three_cycles.sm")
    assert dependency_graph(a) is not dependency_graph(b)
