"""Turn a placed decomposition into a CNOT circuit that respects the coupling graph."""

from __future__ import annotations

from dataclasses import dataclass

from .arch import ArchitectureGraph, DistanceTable, shortest_path
from .errors import DimensionMismatch, InvalidPath, InvalidPlacement, ParseError
from .gf2 import BitMatrix, CnotGate, circuit_matrix
from .placer import Placement
from .rewrite import Decomposition


@dataclass(frozen=True)
class RoutedCircuit:
    """Physical CNOT gates plus the wire bookkeeping needed to read them.

    Logical input ``v`` enters on wire ``placement(v)``; logical output ``r``
    leaves on wire ``output_relabel[r - 1]``.
    """

    n_physical: int
    gates: tuple[CnotGate, ...]
    output_relabel: tuple[int, ...]
    placement: Placement
    graph: ArchitectureGraph | None = None

    @property
    def size(self) -> int:
        return len(self.gates)

    def depth(self) -> int:
        return circuit_depth(self.gates, self.n_physical)

    def to_text(self) -> str:
        lines = [f"qubits {self.n_physical}"]
        lines += [str(g) for g in self.gates]
        lines.append("place " + " ".join(str(p) for p in self.placement.assign))
        lines.append("relabel " + " ".join(str(p) for p in self.output_relabel))
        return "\n".join(lines) + "\n"


def circuit_depth(gates, n: int) -> int:
    """Greedy as-soon-as-possible layering."""
    level = [0] * (n + 1)
    depth = 0
    for g in gates:
        d = max(level[g.control], level[g.target]) + 1
        level[g.control] = level[g.target] = d
        depth = max(depth, d)
    return depth


def expand_long_cnot(path: list[int], graph: ArchitectureGraph | None = None) -> list[CnotGate]:
    """CNOT from ``path[0]`` to ``path[-1]`` using only neighbouring pairs.

    For ``d = len(path) - 1 > 1`` this emits four chains of nearest-neighbour
    CNOTs (``4d - 4`` gates) that leave every interior wire unchanged.
    """
    if len(path) < 2:
        raise InvalidPath("a path needs at least two vertices")
    if len(set(path)) != len(path):
        raise InvalidPath(f"path {path} revisits a vertex")
    if graph is not None:
        for a, b in zip(path, path[1:]):
            if not graph.has_edge(a, b):
                raise InvalidPath(f"vertices {a} and {b} are not adjacent")
    d = len(path) - 1
    if d == 1:
        return [CnotGate(path[0], path[1])]
    # path[j - 1] is vertex j of the chain 1..d+1
    step = lambda j: CnotGate(path[j - 1], path[j])  # noqa: E731
    gates = [step(j) for j in range(d, 0, -1)]
    gates += [step(j) for j in range(2, d + 1)]
    gates += [step(j) for j in range(d - 1, 0, -1)]
    gates += [step(j) for j in range(2, d)]
    return gates


def _swap_chain(t: DistanceTable, a: int, b: int) -> list[CnotGate]:
    forward = expand_long_cnot(shortest_path(t, a, b))
    backward = expand_long_cnot(shortest_path(t, b, a))
    return forward + backward + forward


def route_circuit(
    d: Decomposition, p: Placement, t: DistanceTable, emit_swaps: bool = False
) -> RoutedCircuit:
    """Emit ``d.seq`` in execution order, each op along a shortest path.

    ``RowAdd(i, j)`` becomes a CNOT with control ``p(j)`` and target ``p(i)``.
    The permutation factor is left as output relabelling unless
    ``emit_swaps`` is set, in which case it is realised with routed swaps so
    that output ``r`` ends on wire ``p(r)``.
    """
    if p.n != d.n:
        raise InvalidPlacement(f"placement covers {p.n} qubits, decomposition has {d.n}")
    p.validate(t.n)
    gates: list[CnotGate] = []
    for op in reversed(d.seq):
        control, target = p(op.j), p(op.i)
        gates += expand_long_cnot(shortest_path(t, control, target))
    relabel = [p(d.perm(r)) for r in range(1, d.n + 1)]
    if emit_swaps:
        # wire currently carrying each output; fix wires one cycle at a time
        where = {r: relabel[r - 1] for r in range(1, d.n + 1)}
        holder = {w: r for r, w in where.items()}
        for r in range(1, d.n + 1):
            want, have = p(r), where[r]
            if want == have:
                continue
            gates += _swap_chain(t, have, want)
            other = holder[want]
            where[r], where[other] = want, have
            holder[want], holder[have] = r, other
        relabel = [p(r) for r in range(1, d.n + 1)]
    return RoutedCircuit(t.n, tuple(gates), tuple(relabel), p, t.graph)


def expected_physical_matrix(rc: RoutedCircuit, a: BitMatrix) -> BitMatrix:
    """The physical-wire linear map a correct routing of ``a`` must have."""
    n = rc.n_physical
    rows = [1 << (w - 1) for w in range(1, n + 1)]
    placed = set(rc.placement.assign)
    for w in placed:
        rows[w - 1] = 0
    for r in range(1, a.n + 1):
        value = 0
        arow = a.rows[r - 1]
        for c in range(1, a.n + 1):
            if (arow >> (c - 1)) & 1:
                value |= 1 << (rc.placement(c) - 1)
        rows[rc.output_relabel[r - 1] - 1] = value
    return BitMatrix(n, rows)


def verify_routed(rc: RoutedCircuit, a: BitMatrix, graph: ArchitectureGraph | None = None) -> bool:
    """Simulate ``rc`` and compare with ``a`` under the placement and relabelling.

    Unplaced wires must come out untouched, and every gate must sit on an
    edge of ``graph`` (default: the graph the circuit was routed for).
    """
    graph = graph if graph is not None else rc.graph
    if a.n != rc.placement.n or a.n != len(rc.output_relabel):
        raise DimensionMismatch(f"matrix has {a.n} qubits, circuit maps {rc.placement.n}")
    if a.n > rc.n_physical:
        raise DimensionMismatch("matrix larger than the physical register")
    if sorted(rc.output_relabel) != sorted(rc.placement.assign):
        return False
    if graph is not None and any(not graph.has_edge(g.control, g.target) for g in rc.gates):
        return False
    return circuit_matrix(rc.gates, rc.n_physical) == expected_physical_matrix(rc, a)


def parse_circuit(text: str) -> tuple[int, list[CnotGate], list[int] | None, list[int] | None]:
    """Parse the circuit format: ``qubits``, ``cnot`` lines, optional ``place``/``relabel``.

    Returns ``(n, gates, place, relabel)``.
    """
    n = None
    gates: list[CnotGate] = []
    place = relabel = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            values = [int(x) for x in rest]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer argument") from None
        if head == "qubits":
            if n is not None or len(values) != 1 or values[0] < 1:
                raise ParseError(f"line {lineno}: bad qubits header")
            n = values[0]
        elif n is None:
            raise ParseError(f"line {lineno}: expected 'qubits <n>' first")
        elif head == "cnot":
            if place is not None or relabel is not None:
                raise ParseError(f"line {lineno}: cnot after trailer")
            if len(values) != 2 or values[0] == values[1]:
                raise ParseError(f"line {lineno}: expected 'cnot <control> <target>'")
            if not all(1 <= x <= n for x in values):
                raise ParseError(f"line {lineno}: qubit outside 1..{n}")
            gates.append(CnotGate(*values))
        elif head in ("place", "relabel"):
            if any(not 1 <= x <= n for x in values) or len(set(values)) != len(values):
                raise ParseError(f"line {lineno}: bad {head} list")
            if head == "place":
                place = values
            else:
                relabel = values
        else:
            raise ParseError(f"line {lineno}: unknown directive {head!r}")
    if n is None:
        raise ParseError("missing 'qubits <n>' header")
    return n, gates, place, relabel
