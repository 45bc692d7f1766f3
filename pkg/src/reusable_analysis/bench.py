"""Direct vs. reusable (overlay + kernel) cycle analysis timings.

Each repetition times both variants back to back, alternating which one goes
first.  The overlay cache is cleared before every reusable run so each
sample pays for building the overlay, as a fresh AST would.  Corpus
generation and parsing happen before any timing starts, and the cyclic
garbage collector is paused inside each sample, as ``timeit`` does.
"""

from __future__ import annotations

import csv
import gc
import io
import random
import statistics
import time
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Sequence

from .frontends import javadeps, statemachine
from .frontends.javadeps import Corpus
from .frontends.statemachine import StateMachine

KINDS = ("sm", "java-types", "java-packages")
COLUMNS = (
    "Scenario",
    "Files",
    "Graph Size",
    "Direct Median (ms)",
    "Reusable Median (ms)",
    "Overhead (%)",
)


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class BenchScenario:
    name: str
    kind: str
    entities: int
    density: float
    seed: int = 0
    # java only: number of packages the types are spread over
    packages: int = 1
    repetitions: int = 101


SCENARIOS: dict[str, BenchScenario] = {
    s.name: s
    for s in (
        BenchScenario("sm-1k", "sm", 1_000, 3e-3),
        BenchScenario("sm-10k", "sm", 10_000, 3e-4),
        BenchScenario("java-types-1k", "java-types", 1_000, 3e-3, packages=20),
        BenchScenario("java-types-10k", "java-types", 10_000, 3e-4, packages=100),
        BenchScenario("java-packages-1k", "java-packages", 2_000, 1e-3, packages=1_000),
        BenchScenario("java-packages-10k", "java-packages", 20_000, 1e-4, packages=10_000),
    )
}
# the scenarios whose overlay has at least 10^4 components
LARGE = ("sm-10k", "java-types-10k", "java-packages-10k")


def overhead_pct(direct_ms: float, reusable_ms: float) -> float:
    if direct_ms == reusable_ms:
        return 0.0
    return 100.0 * (reusable_ms - direct_ms) / direct_ms


@dataclass(frozen=True)
class BenchResult:
    scenario: str
    files: int
    graph_size: int
    direct_median_ms: float
    reusable_median_ms: float
    direct_samples_ms: tuple[float, ...] = field(default=(), repr=False)
    reusable_samples_ms: tuple[float, ...] = field(default=(), repr=False)
    # overlay constructions observed during the timed repetitions
    constructions: int = 0

    @property
    def overhead_pct(self) -> float:
        return overhead_pct(self.direct_median_ms, self.reusable_median_ms)

    def row(self) -> list[str]:
        return [
            self.scenario,
            str(self.files),
            str(self.graph_size),
            f"{self.direct_median_ms:.3f}",
            f"{self.reusable_median_ms:.3f}",
            f"{self.overhead_pct:.2f}",
        ]


@dataclass
class GeneratedCorpus:
    scenario: BenchScenario
    files: int
    data: Any  # StateMachine or Corpus
    sources: dict[str, str] = field(default_factory=dict, repr=False)


def _sample_pairs(rng: random.Random, n: int, count: int, allow_self: bool) -> list[tuple[int, int]]:
    if allow_self:
        return [divmod(k, n) for k in rng.sample(range(n * n), count)]
    # index over the n*(n-1) off-diagonal pairs
    pairs = []
    for k in rng.sample(range(n * (n - 1)), count):
        a, b = divmod(k, n - 1)
        pairs.append((a, b + 1 if b >= a else b))
    return pairs


def generate_corpus(sc: BenchScenario) -> GeneratedCorpus:
    """Deterministic synthetic input for ``sc``; same seed, same corpus."""
    if sc.kind not in KINDS:
        raise ScenarioError(f"unknown scenario kind {sc.kind!r}")
    if sc.entities < 0:
        raise ScenarioError("entity count must be non-negative")
    if not 0.0 <= sc.density <= 1.0:
        raise ScenarioError(f"density {sc.density} outside [0, 1]")
    n = sc.entities
    count = round(sc.density * n * n)
    rng = random.Random(sc.seed)
    if sc.kind == "sm":
        return _generate_machine(sc, rng, count)
    if n and sc.packages < 1:
        raise ScenarioError("java scenarios need at least one package")
    if count > n * (n - 1):
        raise ScenarioError(f"{count} references exceed the {n * (n - 1)} possible type pairs")
    return _generate_java(sc, rng, count)


def _generate_machine(sc: BenchScenario, rng: random.Random, count: int) -> GeneratedCorpus:
    n = sc.entities
    if n == 0:
        # the DSL needs an initial state, so an empty machine is built directly
        empty = StateMachine([], [], None, file=f"{sc.name}.sm")
        return GeneratedCorpus(sc, 1, empty)
    lines = [("final " if rng.random() < 0.1 else "") + f"state S{i}" for i in range(n)]
    for a, b in _sample_pairs(rng, n, count, allow_self=True):
        lines.append(f"S{a}->S{b}:{rng.randrange(2)}")
    lines.append("initial S0")
    text = "\n".join(lines) + "\n"
    file = f"{sc.name}.sm"
    return GeneratedCorpus(sc, 1, statemachine.parse_state_machine(text, file), {file: text})


def _generate_java(sc: BenchScenario, rng: random.Random, count: int) -> GeneratedCorpus:
    n = sc.entities
    package_of = [f"p{i % sc.packages}" for i in range(n)]
    refs: list[list[int]] = [[] for _ in range(n)]
    for a, b in _sample_pairs(rng, n, count, allow_self=False) if n > 1 else []:
        refs[a].append(b)
    sources: dict[str, str] = {}
    for i in range(n):
        pkg = package_of[i]
        imports = sorted({f"{package_of[j]}.T{j}" for j in refs[i] if package_of[j] != pkg})
        body = [f"    private T{j} f{k};" for k, j in enumerate(refs[i])]
        body.append(f"    int size() {{ return {len(refs[i])}; }}")
        text = "\n".join(
            [f"package {pkg};", ""]
            + [f"import {imp};" for imp in imports]
            + ["", f"public class T{i} {{"]
            + body
            + ["}", ""]
        )
        sources[f"{pkg}/T{i}.java"] = text
    units = [javadeps.scan_java_file(text, path) for path, text in sources.items()]
    return GeneratedCorpus(sc, len(units), Corpus(units), sources)


def variants(kind: str) -> tuple[Callable, Callable, Any]:
    """(direct analysis, reusable analysis, memoized overlay builder)."""
    if kind == "sm":
        return statemachine.direct_cycle_report, statemachine.cycle_report, statemachine.dependency_graph
    if kind == "java-types":
        return javadeps.direct_type_cycles, javadeps.type_cycles, javadeps.type_dependency_graph
    if kind == "java-packages":
        return javadeps.direct_package_cycles, javadeps.package_cycles, javadeps.package_dependency_graph
    raise ScenarioError(f"unknown scenario kind {kind!r}")


def _timed_ms(fn: Callable, arg: Any) -> float:
    # like timeit: collect first, then keep the cyclic collector out of the sample
    gc.collect()
    enabled = gc.isenabled()
    gc.disable()
    try:
        t0 = time.perf_counter_ns()
        fn(arg)
        return (time.perf_counter_ns() - t0) / 1e6
    finally:
        if enabled:
            gc.enable()


def measure(sc: BenchScenario, generated: GeneratedCorpus | None = None) -> BenchResult:
    generated = generated or generate_corpus(sc)
    direct, reusable, overlay = variants(sc.kind)
    data = generated.data

    overlay.cache_clear()
    graph_size = overlay(data).size
    # one untimed run of each variant to settle imports and allocator state
    direct(data)
    overlay.cache_clear()
    reusable(data)

    before = overlay.constructions
    direct_ms: list[float] = []
    reusable_ms: list[float] = []
    for rep in range(sc.repetitions):
        overlay.cache_clear()
        if rep % 2 == 0:
            direct_ms.append(_timed_ms(direct, data))
            reusable_ms.append(_timed_ms(reusable, data))
        else:
            reusable_ms.append(_timed_ms(reusable, data))
            direct_ms.append(_timed_ms(direct, data))
    constructions = overlay.constructions - before
    overlay.cache_clear()

    return BenchResult(
        sc.name,
        generated.files,
        graph_size,
        statistics.median(direct_ms) if direct_ms else 0.0,
        statistics.median(reusable_ms) if reusable_ms else 0.0,
        tuple(direct_ms),
        tuple(reusable_ms),
        constructions,
    )


def emit_table(results: Sequence[BenchResult], fmt: str = "csv") -> str:
    rows = [r.row() for r in results]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


def emit_samples(results: Sequence[BenchResult]) -> str:
    """Raw per-repetition samples as CSV, for inspection."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scenario", "repetition", "direct_ms", "reusable_ms"])
    for r in results:
        for i, (d, u) in enumerate(zip(r.direct_samples_ms, r.reusable_samples_ms)):
            writer.writerow([r.scenario, i, f"{d:.4f}", f"{u:.4f}"])
    return buf.getvalue()


def scenario(name: str, repetitions: int | None = None, seed: int | None = None) -> BenchScenario:
    try:
        sc = SCENARIOS[name]
    except KeyError:
        raise ScenarioError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None
    if repetitions is not None:
        sc = replace(sc, repetitions=repetitions)
    if seed is not None:
        sc = replace(sc, seed=seed)
    return sc
