import pytest

from reusable_analysis.errors import InheritanceCycleError, ParseError, ResolutionError
from reusable_analysis.frontends.minijava import MjProgram, parse_minijava, scope_tree
from reusable_analysis.kernel.scope import variable_shadowings


def findings(text, file="T.java"):
    return variable_shadowings(scope_tree(parse_minijava(text, file)))


def summary(fs):
    return [
        (f.shadower.backlink.key, f.shadowed.backlink.key)
        for f in fs
    ]


def test_field_shadowing_findings_and_positions(fixtures):
    program = parse_minijava((fixtures / "field_shadowing.java").read_text(), "field_shadowing.java")
    fs = variable_shadowings(scope_tree(program))
    assert summary(fs) == [
        ("A.<init>.x", "A.x"),
        ("A.m.x", "A.x"),
        ("B.x", "A.x"),
        ("B.C.x", "B.x"),
    ]
    where = [(f.shadower.backlink.span.line_start, f.shadower.backlink.span.col_start) for f in fs]
    assert where == [(3, 16), (7, 9), (11, 7), (13, 17)]
    assert {(f.shadowed.backlink.span.line_start, f.shadowed.backlink.span.col_start) for f in fs} == {(2, 17), (11, 7)}
    assert all(f.shadower.backlink.span.file == "field_shadowing.java" for f in fs)


def test_field_shadowing_parse_shape(fixtures):
    program = parse_minijava((fixtures / "field_shadowing.java").read_text(), "field_shadowing.java")
    a, b = program.classes
    assert [m.name for m in a.members] == ["x", "<init>", "m"]
    ctor = a.methods[0]
    assert ctor.is_constructor and [p.name for p in ctor.parameters] == ["x"]
    assert [v.name for v in a.methods[1].locals] == ["x"]
    assert b.superclass == "A" and [c.name for c in b.classes] == ["C"]


def test_scopes_then_inheritance_links(fixtures):
    tree = scope_tree(parse_minijava((fixtures / "field_shadowing.java").read_text(), "field_shadowing.java"))
    kinds = [event for event, _ in tree.trace]
    assert kinds == ["scope"] * 5 + ["inherit"]
    assert tree.trace[-1] == ("inherit", "B")


def test_forward_superclass_reference():
    # B extends a class declared later in the file
    fs = findings("class B extends A { int v; } class A { int v; }")
    assert summary(fs) == [("B.v", "A.v")]


def test_local_variable_forms():
    text = """
    class K {
      int i;
      void f(int[] xs) {
        for (int i = 0; i < 3; i++) { }
        for (String s : names()) { }
        try (Reader r = open()) { } catch (IOException | RuntimeException e) { }
        java.util.List<String> list = null;
        int a = 1, b = 2;
        label: while (true) { break label; }
        Runnable run = () -> { int z; };
      }
    }
    """
    program = parse_minijava(text)
    method = program.classes[0].methods[0]
    assert [p.name for p in method.parameters] == ["xs"]
    names = [v.name for v in method.locals]
    for expected in ("i", "s", "r", "e", "list", "a", "b", "run"):
        assert expected in names
    assert ("K.f.i", "K.i") in summary(variable_shadowings(scope_tree(program)))


def test_local_class_inside_method():
    fs = findings("class O { int q; void f() { class L { int q; } } }")
    assert summary(fs) == [("O.f.L.q", "O.q")]


def test_merged_program_links_across_files():
    a = parse_minijava("class A { int x; }", "A.java")
    b = parse_minijava("class B extends A { int x; }", "B.java")
    merged = MjProgram.merge([a, b])
    assert merged.files == ["A.java", "B.java"]
    fs = variable_shadowings(scope_tree(merged))
    assert [(f.shadower.backlink.span.file, f.shadowed.backlink.span.file) for f in fs] == [("B.java", "A.java")]


def test_unresolved_superclass_reports_position():
    with pytest.raises(ResolutionError) as info:
        scope_tree(parse_minijava("class B\n  extends Missing { }", "B.java"))
    assert (info.value.file, info.value.line) == ("B.java", 2)


def test_cyclic_inheritance_is_rejected():
    with pytest.raises(InheritanceCycleError):
        scope_tree(parse_minijava("class A extends B { } class B extends A { }"))


@pytest.mark.parametrize(
    "text",
    [
        "class A { int x = ; ",
        "class { }",
        "class A { void f( { } }",
        "class A { int x }",
        "class A extends { }",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_minijava(text, "E.java")


def test_tree_is_memoized_per_program(fixtures):
    program = parse_minijava((fixtures / "field_shadowing.java").read_text(), "field_shadowing.java")
    scope_tree.cache_clear()
    before = scope_tree.constructions
    trees = {id(scope_tree(program)) for _ in range(100)}
    assert len(trees) == 1 and scope_tree.constructions == before + 1
