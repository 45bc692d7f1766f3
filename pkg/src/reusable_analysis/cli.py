"""``reusable-analysis`` command line.

Exit codes follow linter habits: 0 clean, 1 findings reported, 2 bad usage
or unreadable input.  Findings go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Sequence, TextIO

from . import bench
from .errors import AnalysisError
from .findings import cycle_findings
from .frontends import javadeps, minijava, mlite, statemachine
from .kernel.graph import render_dot, scc
from .kernel.scope import variable_shadowings
from .report import AnalysisReport

SUFFIXES = {"sm": ".sm", "java-types": ".java", "java-packages": ".java", "minijava": ".java", "mlite": ".mo"}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # report usage problems as exit 2 without tearing down the caller
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reusable-analysis", description="Cycle and shadowing analyses over small languages.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    cycles = sub.add_parser("cycles", help="report dependency cycles")
    cycles.add_argument("--lang", required=True, choices=["sm", "java-types", "java-packages"])
    cycles.add_argument("--format", default="text", choices=["text", "json", "dot"])
    cycles.add_argument("paths", nargs="+", metavar="PATH")

    shadowing = sub.add_parser("shadowing", help="report shadowed declarations")
    shadowing.add_argument("--lang", required=True, choices=["minijava", "mlite"])
    shadowing.add_argument("--format", default="text", choices=["text", "json"])
    shadowing.add_argument("paths", nargs="+", metavar="PATH")

    b = sub.add_parser("bench", help="time direct against reusable analyses")
    b.add_argument("--scenario", action="append", dest="scenarios", metavar="NAME",
                   help=f"repeatable; default: {', '.join(bench.LARGE)}")
    b.add_argument("--reps", type=int, default=None, help="repetitions per variant (default 101)")
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--format", default="csv", choices=["csv", "markdown"])
    b.add_argument("--samples", type=Path, default=None, help="also write raw samples as CSV")
    b.add_argument("--list", action="store_true", help="list scenarios and exit")
    return parser


def _inputs(paths: Sequence[str], suffix: str) -> list[tuple[Path, bool]]:
    """(file, named explicitly) pairs; directories expand recursively in sorted order."""
    out: list[tuple[Path, bool]] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            out.extend((f, False) for f in javadeps.java_files([p], suffix))
        elif p.is_file():
            out.append((p, True))
        else:
            raise AnalysisError(f"{raw}: no such file or directory")
    return out


def _load(paths: Sequence[str], lang: str, parse: Callable[[str, str], object], err: TextIO) -> list[tuple[str, object]]:
    loaded = []
    for path, explicit in _inputs(paths, SUFFIXES[lang]):
        name = str(path)
        try:
            text = path.read_text(encoding="utf-8")
            loaded.append((name, parse(text, name)))
        except (AnalysisError, UnicodeDecodeError) as exc:
            if explicit:
                raise AnalysisError(str(exc)) from exc
            print(f"warning: skipping {name}: {exc}", file=err)
    return loaded


def _cycles(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    if args.lang == "sm":
        loaded = _load(args.paths, args.lang, statemachine.parse_state_machine, err)
        graphs = [statemachine.dependency_graph(m) for _, m in loaded]
    else:
        loaded = _load(args.paths, args.lang, javadeps.scan_java_file, err)
        corpus = javadeps.Corpus(unit for _, unit in loaded)
        overlay = javadeps.type_dependency_graph if args.lang == "java-types" else javadeps.package_dependency_graph
        graphs = [overlay(corpus)]
    findings = [f for g in graphs for f in cycle_findings(g)]
    if args.format == "dot":
        out.write("".join(render_dot(g, scc(g)) for g in graphs))
    else:
        report = AnalysisReport(
            "cycles",
            args.lang,
            [name for name, _ in loaded],
            findings,
            {
                "files": len(loaded),
                "components": sum(len(g) for g in graphs),
                "edges": sum(g.edge_count for g in graphs),
            },
        )
        out.write(report.dumps() if args.format == "json" else report.text())
    return 1 if findings else 0


def _shadowing(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    if args.lang == "minijava":
        loaded = _load(args.paths, args.lang, minijava.parse_minijava, err)
        # one program: classes in different files may extend each other
        trees = [minijava.scope_tree(minijava.MjProgram.merge(p for _, p in loaded))] if loaded else []
    else:
        loaded = _load(args.paths, args.lang, mlite.parse_mlite, err)
        trees = [mlite.scope_tree(m) for _, m in loaded]
    findings = [f for t in trees for f in variable_shadowings(t)]
    report = AnalysisReport(
        "shadowing",
        args.lang,
        [name for name, _ in loaded],
        findings,
        {
            "files": len(loaded),
            "scopes": sum(1 for t in trees for _ in t.scopes()),
            "declarations": sum(1 for t in trees for _ in t.declarations()),
        },
    )
    out.write(report.dumps() if args.format == "json" else report.text())
    return 1 if findings else 0


def _bench(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    if args.list:
        for sc in bench.SCENARIOS.values():
            out.write(f"{sc.name}\t{sc.kind}\t{sc.entities}\t{sc.density:g}\n")
        return 0
    if args.reps is not None and args.reps < 1:
        raise bench.ScenarioError("--reps must be at least 1")
    results = []
    for name in args.scenarios or bench.LARGE:
        sc = bench.scenario(name, args.reps, args.seed)
        print(f"measuring {sc.name} ({sc.repetitions} repetitions)", file=err)
        results.append(bench.measure(sc))
    out.write(bench.emit_table(results, args.format))
    if args.samples is not None:
        args.samples.write_text(bench.emit_samples(results), encoding="utf-8")
    return 0


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _Usage as exc:
        print(exc, file=err)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    handler = {"cycles": _cycles, "shadowing": _shadowing, "bench": _bench}[args.command]
    try:
        return handler(args, out, err)
    except (AnalysisError, bench.ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 2


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
