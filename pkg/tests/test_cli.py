import io
import json
import subprocess
import sys

import jsonschema
import pytest

from reusable_analysis.cli import run
from reusable_analysis.report import load_schema


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def schema():
    return load_schema()


def test_cycles_text_on_three_cycles(fixtures):
    code, out, _ = invoke("cycles", "--lang", "sm", str(fixtures / "three_cycles.sm"), "--format", "text")
    assert code == 1
    lines = out.splitlines()
    assert [line.split(": ", 1)[1] for line in lines[:3]] == ["cycle 1: A, F", "cycle 2: B, C, E", "cycle 3: G"]
    assert lines[-1] == "3 cycle findings"


def test_empty_machine_exits_zero(fixtures):
    code, out, _ = invoke("cycles", "--lang", "sm", str(fixtures / "empty_machine.sm"))
    assert code == 0 and out == "0 cycle findings\n"


def test_shadowing_text_on_field_shadowing(fixtures):
    code, out, _ = invoke("shadowing", "--lang", "minijava", str(fixtures / "field_shadowing.java"))
    assert code == 1
    assert out.splitlines()[-1] == "4 shadowing findings"
    assert "field_shadowing.java:13:17: 'x' shadows 'x' declared at" in out


def test_shadowing_constant_wording(fixtures):
    code, out, _ = invoke("shadowing", "--lang", "mlite", str(fixtures / "constant_shadowing.mo"))
    assert code == 1 and "shadows constant 'x'" in out


@pytest.mark.parametrize(
    "argv, count",
    [
        (("cycles", "--lang", "sm", "three_cycles.sm"), 3),
        (("cycles", "--lang", "sm", "empty_machine.sm"), 0),
        (("cycles", "--lang", "java-types", "pkgcycle"), 1),
        (("cycles", "--lang", "java-packages", "pkgcycle"), 1),
        (("shadowing", "--lang", "minijava", "field_shadowing.java"), 4),
        (("shadowing", "--lang", "mlite", "constant_shadowing.mo"), 1),
    ],
)
def test_json_validates_and_spans_resolve(fixtures, schema, argv, count):
    *head, path = argv
    code, out, _ = invoke(*head, str(fixtures / path), "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert code == (1 if count else 0)
    assert doc["stats"]["findings"] == len(doc["findings"]) == count
    for span in _spans(doc):
        if span is None:
            assert doc["frontend"] == "java-packages"
            continue
        lines = open(span["file"], encoding="utf-8").read().splitlines()
        assert 1 <= span["line_start"] <= len(lines)
        assert span["col_start"] <= len(lines[span["line_start"] - 1]) + 1


def _spans(doc):
    for f in doc["findings"]:
        if f["kind"] == "cycle":
            yield from (m["span"] for m in f["members"])
        else:
            yield f["shadower"]["span"]
            yield f["shadowed"]["span"]


def test_json_stats(fixtures):
    _, out, _ = invoke("cycles", "--lang", "sm", str(fixtures / "three_cycles.sm"), "--format", "json")
    assert json.loads(out)["stats"] == {"files": 1, "components": 7, "edges": 12, "findings": 3}


def test_dot_output(fixtures):
    code, out, _ = invoke("cycles", "--lang", "sm", str(fixtures / "three_cycles.sm"), "--format", "dot")
    assert code == 1 and out.startswith("digraph {") and out.count("subgraph cluster_") == 3


def test_json_is_byte_identical_across_processes(fixtures):
    argv = [sys.executable, "-m", "reusable_analysis.cli", "shadowing", "--lang", "minijava",
            str(fixtures / "field_shadowing.java"), "--format", "json"]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False)
    assert first.returncode == second.returncode == 1
    assert first.stdout == second.stdout and first.stdout


@pytest.mark.parametrize(
    "argv",
    [
        ("frobnicate",),
        ("cycles", "--lang", "cobol", "x"),
        ("cycles", "--lang", "sm"),
        ("shadowing", "--lang", "minijava", "--format", "dot", "x"),
        ("cycles", "--lang", "sm", "--bogus", "x"),
        (),
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    code, out, _ = invoke(*argv)
    assert code == 2 and out == ""
    assert "usage:" in capsys.readouterr().err


def test_missing_file_exits_two(tmp_path):
    code, out, err = invoke("cycles", "--lang", "sm", str(tmp_path / "nope.sm"))
    assert code == 2 and out == "" and "no such file" in err


def test_explicit_bad_file_exits_two(tmp_path):
    bad = tmp_path / "bad.sm"
    bad.write_text("state A\nA->B:1\ninitial A\n")
    code, out, err = invoke("cycles", "--lang", "sm", str(bad))
    assert code == 2 and out == ""
    assert f"{bad}:2:4: unresolved state 'B'" in err


def test_bad_files_found_by_walking_are_skipped(tmp_path, fixtures):
    (tmp_path / "good.sm").write_text((fixtures / "three_cycles.sm").read_text())
    (tmp_path / "sub").mkdir()
    (tmp_path / "sub" / "bad.sm").write_text("state A\n")
    (tmp_path / "notes.txt").write_text("ignored")
    code, out, err = invoke("cycles", "--lang", "sm", str(tmp_path), "--format", "json")
    doc = json.loads(out)
    assert code == 1
    assert doc["inputs"] == [str(tmp_path / "good.sm")]
    assert "warning: skipping" in err and "bad.sm" in err


def test_multiple_machines_are_analyzed_separately(tmp_path, fixtures):
    for name in ("a.sm", "b.sm"):
        (tmp_path / name).write_text((fixtures / "three_cycles.sm").read_text())
    code, out, _ = invoke("cycles", "--lang", "sm", str(tmp_path), "--format", "json")
    doc = json.loads(out)
    assert doc["stats"]["findings"] == 6
    files = [f["members"][0]["span"]["file"] for f in doc["findings"]]
    assert files == sorted(files)


def test_minijava_files_are_merged(tmp_path):
    (tmp_path / "A.java").write_text("class A { int x; }")
    (tmp_path / "B.java").write_text("class B extends A { int x; }")
    code, out, _ = invoke("shadowing", "--lang", "minijava", str(tmp_path), "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["findings"][0]["shadowed"]["key"] == "A.x"


def test_bench_list():
    code, out, _ = invoke("bench", "--list")
    assert code == 0 and "sm-10k" in out and "java-packages-10k" in out


def test_bench_small_run(tmp_path):
    samples = tmp_path / "s.csv"
    code, out, err = invoke("bench", "--scenario", "sm-1k", "--scenario", "java-types-1k",
                            "--reps", "3", "--seed", "1", "--samples", str(samples))
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("Scenario,Files,Graph Size")
    assert [line.split(",")[0] for line in lines[1:]] == ["sm-1k", "java-types-1k"]
    assert len(samples.read_text().splitlines()) == 1 + 2 * 3
    assert "measuring sm-1k" in err


def test_bench_rejects_unknown_scenario_and_bad_reps():
    assert invoke("bench", "--scenario", "nope")[0] == 2
    assert invoke("bench", "--scenario", "sm-1k", "--reps", "0")[0] == 2
