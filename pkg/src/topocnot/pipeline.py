"""End-to-end compilation and the random-circuit benchmark."""

from __future__ import annotations

import csv
import io
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .arch import ArchitectureGraph, DistanceTable, all_pairs_distances, builtin_architecture
from .errors import CompileError, InvalidParams, ParseError, TooManyQubits, VerificationFailed
from .gf2 import BitMatrix, CnotGate, circuit_matrix
from .placer import (
    InteractionGraph,
    Placement,
    exhaustive_place,
    export_milp,
    import_solution,
    interaction_graph,
    local_search_place,
    objective,
)
from .rewrite import Decomposition
from .router import RoutedCircuit, parse_circuit, route_circuit, verify_routed
from .synth import decomposition_candidates

log = logging.getLogger(__name__)


def random_circuit(n_qubits: int, n_gates: int, seed: int) -> list[CnotGate]:
    """Uniform random CNOTs: each gate is an ordered pair of distinct qubits."""
    if n_qubits < 2:
        raise InvalidParams(f"need at least 2 qubits, got {n_qubits}")
    if n_gates < 0:
        raise InvalidParams(f"gate count must be non-negative, got {n_gates}")
    rng = random.Random(seed)
    gates = []
    for _ in range(n_gates):
        control, target = rng.sample(range(1, n_qubits + 1), 2)
        gates.append(CnotGate(control, target))
    return gates


@dataclass
class CompileOptions:
    """Knobs for :func:`compile_pipeline`.

    Attributes:
        place: ``"local"``, ``"exhaustive"`` or ``"import"``.
        k: Slots permuted per local-search move.
        seed: Seeds restarts and the greedy decompositions.
        restarts: Extra local-search starts; ``None`` means 10 on devices
            with at least 16 qubits and 0 otherwise.
        polish_k: Size of the polishing sweep (``None`` disables it).
        warm_start: First local-search start.
        solution: Solver output text, required for ``place="import"``.
        emit_swaps: Realise the output permutation with gates.
        greedy_trials: Greedy decompositions tried per orientation; 0 keeps
            only the Gauss-Jordan route (plus the input circuit, if any).
        lookahead: Rewrite window bound.
        time_limit: Seconds after which no new restart starts.
    """

    place: str = "local"
    k: int = 2
    seed: int = 0
    restarts: int | None = None
    polish_k: int | None = 3
    warm_start: Placement | None = None
    solution: str | None = None
    emit_swaps: bool = False
    greedy_trials: int = 2
    lookahead: int | None = 24
    time_limit: float | None = None

    def resolved_restarts(self, n_physical: int) -> int:
        if self.restarts is not None:
            return self.restarts
        return 10 if n_physical >= 16 else 0


@dataclass
class CompileResult:
    circuit: RoutedCircuit
    decomposition: Decomposition
    stats: dict = field(default_factory=dict)


def load_input(text: str) -> tuple[BitMatrix, list[CnotGate] | None]:
    """Read either a ``matrix`` file or a ``qubits``/``cnot`` circuit file."""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("matrix"):
            return BitMatrix.from_text(text), None
        if line.startswith("qubits"):
            n, gates, _, _ = parse_circuit(text)
            return circuit_matrix(gates, n), gates
        break
    raise ParseError("input must start with 'matrix <n>' or 'qubits <n>'")


def _place(d: Decomposition, t: DistanceTable, opts: CompileOptions, full: bool) -> Placement:
    ig = interaction_graph(d)
    if opts.place == "exhaustive":
        return exhaustive_place(ig, t)[0]
    if opts.place == "import":
        return import_solution(opts.solution, ig, t)
    if opts.place != "local":
        raise InvalidParams(f"unknown placement mode {opts.place!r}")
    return local_search_place(
        ig,
        t,
        k=opts.k,
        seed=opts.seed,
        restarts=opts.resolved_restarts(t.n) if full else 0,
        polish_k=opts.polish_k,
        warm_start=opts.warm_start,
        time_limit=opts.time_limit,
    )


def compile_pipeline(
    source: BitMatrix | Sequence[CnotGate],
    arch: ArchitectureGraph,
    opts: CompileOptions | None = None,
    n_qubits: int | None = None,
    table: DistanceTable | None = None,
) -> CompileResult:
    """Decompose, place, route and verify.

    ``source`` is a matrix or a gate list (``n_qubits`` defaults to the
    device size for gate lists).  Several decompositions are scored by their
    placement objective; the best one gets the full placement budget.
    Raises ``VerificationFailed`` if the routed circuit does not implement
    the input, which indicates a bug.
    """
    opts = opts or CompileOptions()
    started = time.perf_counter()
    if isinstance(source, BitMatrix):
        a, gates = source, None
    else:
        gates = list(source)
        a = circuit_matrix(gates, n_qubits if n_qubits is not None else arch.n)
    if a.n > arch.n:
        raise TooManyQubits(f"{a.n} logical qubits do not fit on {arch.n} physical qubits")
    t = table if table is not None else all_pairs_distances(arch)
    if opts.place == "import" and opts.solution is None:
        raise InvalidParams("place='import' needs solver output")

    candidates = decomposition_candidates(
        a, gates=gates, greedy_trials=opts.greedy_trials, seed=opts.seed, lookahead=opts.lookahead
    )
    scored = []
    for label, d in candidates:
        p = _place(d, t, opts, full=False)
        scored.append((objective(p, interaction_graph(d), t), len(d), label, d, p))
    best = min(scored, key=lambda s: (s[0], s[1]))
    _, _, label, d, p = best
    if opts.place == "local" and opts.resolved_restarts(t.n) > 0 and best[0] > 0:
        warm = opts.warm_start or p
        full = local_search_place(
            interaction_graph(d),
            t,
            k=opts.k,
            seed=opts.seed,
            restarts=opts.resolved_restarts(t.n),
            polish_k=opts.polish_k,
            warm_start=warm,
            time_limit=opts.time_limit,
        )
        if objective(full, interaction_graph(d), t) < best[0]:
            p = full

    rc = route_circuit(d, p, t, emit_swaps=opts.emit_swaps)
    if not verify_routed(rc, a, arch):
        raise VerificationFailed("routed circuit does not implement the input matrix")
    ig = interaction_graph(d)
    stats = {
        "decomposition": label,
        "decomposition_length": len(d),
        "shortest_decomposition": min(len(c) for _, c in candidates),
        "objective": objective(p, ig, t),
        "gates": rc.size,
        "depth": rc.depth(),
        "placement": " ".join(str(x) for x in p.assign),
        "wall_time_ms": round(1000 * (time.perf_counter() - started), 3),
    }
    return CompileResult(rc, d, stats)


def milp_text(result: CompileResult, arch: ArchitectureGraph) -> str:
    """LP model of the placement problem for the chosen decomposition."""
    return export_milp(interaction_graph(result.decomposition), all_pairs_distances(arch))[1]


# -- benchmark -----------------------------------------------------------------


@dataclass
class BenchConfig:
    """Random-circuit benchmark settings.

    Attributes:
        architecture: Builtin architecture name.
        counts: Input gate counts, one report row each.
        per_count: Circuits per gate count.
        seed: Master seed; each circuit gets its own derived seed.
        options: Compilation options (placement budget etc.).
        time_budget: Seconds per circuit before restarts are cut short.
        jobs: Worker processes (1 = in-process).
    """

    architecture: str
    counts: Sequence[int]
    per_count: int = 20
    seed: int = 0
    options: CompileOptions = field(default_factory=CompileOptions)
    time_budget: float | None = None
    jobs: int = 1

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise InvalidParams("gate counts must be non-negative")
        if self.per_count < 1:
            raise InvalidParams("per_count must be at least 1")


@dataclass
class BenchRow:
    architecture: str
    gates: int
    mean: float
    min: int
    max: int
    runtime_ms: float
    counts: list[int]
    reference: dict[str, float] = field(default_factory=dict)

    @property
    def delta_vs_steiner(self) -> float | None:
        """``(steiner - ours) / steiner`` in percent, when a steiner value is known."""
        ref = self.reference.get("steiner")
        if not ref:
            return None
        return 100.0 * (ref - self.mean) / ref


@dataclass
class BenchReport:
    rows: list[BenchRow]
    reference_columns: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["architecture", "gates", "mean", "min", "max", "runtime_ms"]
        header += self.reference_columns
        if "steiner" in self.reference_columns:
            header.append("delta_vs_steiner_pct")
        writer.writerow(header)
        for r in self.rows:
            line = [r.architecture, r.gates, f"{r.mean:.4g}", r.min, r.max, f"{r.runtime_ms:.1f}"]
            line += [_fmt(r.reference.get(c)) for c in self.reference_columns]
            if "steiner" in self.reference_columns:
                delta = r.delta_vs_steiner
                line.append("" if delta is None else f"{delta:.1f}")
            writer.writerow(line)
        return buf.getvalue()


def _fmt(x) -> str:
    return "" if x is None else f"{x:g}"


def circuit_seed(master: int, count: int, index: int) -> int:
    """Seed of circuit ``index`` at gate count ``count``; independent of run order."""
    return int(np.random.SeedSequence([master, count, index]).generate_state(1)[0])


def _bench_one(args) -> tuple[int, int, int, float]:
    arch_name, count, index, seed, opts = args
    arch = builtin_architecture(arch_name)
    gates = random_circuit(arch.n, count, seed)
    started = time.perf_counter()
    try:
        result = compile_pipeline(gates, arch, opts, n_qubits=arch.n)
    except CompileError as exc:
        raise type(exc)(f"{exc} (architecture {arch_name}, gates {count}, seed {seed})") from exc
    return count, index, result.circuit.size, 1000 * (time.perf_counter() - started)


def load_reference(path_or_text) -> dict[tuple[str, int], dict[str, float]]:
    """Read a reference CSV with ``architecture`` and ``gates`` key columns."""
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and "\n" not in path_or_text):
        text = Path(path_or_text).read_text()
    else:
        text = path_or_text
    reader = csv.DictReader(io.StringIO(text))
    if not reader.fieldnames or not {"architecture", "gates"} <= set(reader.fieldnames):
        raise ParseError("reference CSV needs 'architecture' and 'gates' columns")
    out: dict[tuple[str, int], dict[str, float]] = {}
    for row in reader:
        key = (row["architecture"], int(row["gates"]))
        out[key] = {k: float(v) for k, v in row.items() if k not in ("architecture", "gates") and v}
    return out


def bench_table(cfg: BenchConfig, reference=None) -> BenchReport:
    """Compile ``per_count`` seeded random circuits per gate count and aggregate."""
    arch = builtin_architecture(cfg.architecture)
    opts = cfg.options
    if cfg.time_budget is not None:
        opts = CompileOptions(**{**opts.__dict__, "time_limit": cfg.time_budget})
    jobs = [
        (cfg.architecture, count, index, circuit_seed(cfg.seed, count, index), opts)
        for count in cfg.counts
        for index in range(cfg.per_count)
    ]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_bench_one, jobs))
    else:
        results = [_bench_one(j) for j in jobs]
    results.sort(key=lambda r: (r[0], r[1]))

    ref = reference if isinstance(reference, dict) or reference is None else load_reference(reference)
    columns: list[str] = []
    if ref:
        for values in ref.values():
            columns += [c for c in values if c not in columns]
    rows = []
    seen = []
    for count in cfg.counts:
        if count in seen:
            continue
        seen.append(count)
        sizes = [r[2] for r in results if r[0] == count]
        times = [r[3] for r in results if r[0] == count]
        rows.append(
            BenchRow(
                architecture=cfg.architecture,
                gates=count,
                mean=float(np.mean(sizes)),
                min=int(min(sizes)),
                max=int(max(sizes)),
                runtime_ms=float(np.mean(times)),
                counts=sizes,
                reference=(ref or {}).get((cfg.architecture, count), {}),
            )
        )
        log.info("%s %d gates: mean %.2f", cfg.architecture, count, rows[-1].mean)
    return BenchReport(rows, columns)


def bundled_text(name: str) -> str:
    """Text of a data file shipped with the package."""
    from importlib import resources

    return resources.files("topocnot").joinpath("data").joinpath(name).read_text()


def mixcolumns_matrix() -> BitMatrix:
    """The AES MixColumns map as a 32x32 GF(2) matrix (byte-major, LSB first)."""
    return BitMatrix.from_text(bundled_text("mixcolumns.matrix"))
