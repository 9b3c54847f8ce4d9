"""Device coupling graphs and all-pairs shortest paths.

Vertices are numbered from 1.  Square and grid builtins use row-major
numbering, so in ``16q-square`` vertex 1 touches 2 and 5.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    DisconnectedGraph,
    DuplicateEdge,
    IndexOutOfRange,
    ParseError,
    SameVertex,
    SelfLoop,
    UnknownArchitecture,
)

BUILTIN_NAMES = ("9q-square", "16q-square", "ibm-q20-tokyo", "line-<n>", "grid-<r>x<c>")


@dataclass(frozen=True)
class ArchitectureGraph:
    n: int
    edges: frozenset[tuple[int, int]]
    name: str | None = None

    def __post_init__(self):
        normal = set()
        for u, v in self.edges:
            if u == v:
                raise SelfLoop(f"self-loop on vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise IndexOutOfRange(f"edge ({u}, {v}) outside 1..{self.n}")
            normal.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normal))

    @classmethod
    def from_edges(cls, n: int, edges, name: str | None = None) -> ArchitectureGraph:
        return cls(n, frozenset(tuple(e) for e in edges), name)

    def neighbors(self, v: int) -> list[int]:
        return sorted(b if a == v else a for a, b in self.edges if v in (a, b))

    def adjacency(self) -> list[list[int]]:
        """Sorted neighbour lists, indexed by vertex (index 0 unused)."""
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for lst in adj:
            lst.sort()
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def is_connected(self) -> bool:
        adj = self.adjacency()
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def to_text(self) -> str:
        lines = [f"qubits {self.n}"] + [f"edge {u} {v}" for u, v in sorted(self.edges)]
        return "\n".join(lines) + "\n"


def parse_architecture(text: str, name: str | None = None) -> ArchitectureGraph:
    """Parse ``qubits <n>`` followed by ``edge <u> <v>`` lines.

    Connectivity is not required here; compilation checks it.
    """
    n = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "qubits":
            if n is not None or len(tokens) != 2 or not tokens[1].isdigit():
                raise ParseError(f"line {lineno}: bad qubits header {line!r}")
            n = int(tokens[1])
            if n < 1:
                raise ParseError(f"line {lineno}: qubit count must be positive")
        elif tokens[0] == "edge":
            if n is None:
                raise ParseError(f"line {lineno}: edge before qubits header")
            if len(tokens) != 3 or not all(t.isdigit() for t in tokens[1:]):
                raise ParseError(f"line {lineno}: bad edge line {line!r}")
            u, v = int(tokens[1]), int(tokens[2])
            if u == v:
                raise SelfLoop(f"line {lineno}: self-loop on vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise IndexOutOfRange(f"line {lineno}: edge ({u}, {v}) outside 1..{n}")
            key = (min(u, v), max(u, v))
            if key in edges:
                raise DuplicateEdge(f"line {lineno}: duplicate edge ({u}, {v})")
            edges.add(key)
        else:
            raise ParseError(f"line {lineno}: unknown directive {tokens[0]!r}")
    if n is None:
        raise ParseError("missing 'qubits <n>' header")
    return ArchitectureGraph(n, frozenset(edges), name)


def load_architecture(path) -> ArchitectureGraph:
    path = Path(path)
    return parse_architecture(path.read_text(), name=path.stem)


def grid(rows: int, cols: int, name: str | None = None) -> ArchitectureGraph:
    edges = set()
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c + 1
            if c + 1 < cols:
                edges.add((v, v + 1))
            if r + 1 < rows:
                edges.add((v, v + cols))
    return ArchitectureGraph(rows * cols, frozenset(edges), name or f"grid-{rows}x{cols}")


def line(n: int) -> ArchitectureGraph:
    return ArchitectureGraph(n, frozenset((v, v + 1) for v in range(1, n)), f"line-{n}")


def builtin_architecture(name: str) -> ArchitectureGraph:
    if name == "9q-square":
        return grid(3, 3, name)
    if name == "16q-square":
        return grid(4, 4, name)
    if name == "ibm-q20-tokyo":
        text = resources.files("topocnot").joinpath("data").joinpath("ibm-q20-tokyo.arch").read_text()
        return parse_architecture(text, name)
    m = re.fullmatch(r"line-(\d+)", name)
    if m and int(m.group(1)) >= 1:
        return line(int(m.group(1)))
    m = re.fullmatch(r"grid-(\d+)x(\d+)", name)
    if m and int(m.group(1)) >= 1 and int(m.group(2)) >= 1:
        return grid(int(m.group(1)), int(m.group(2)))
    raise UnknownArchitecture(f"unknown architecture {name!r}; builtins: {', '.join(BUILTIN_NAMES)}")


@dataclass(frozen=True, eq=False)
class DistanceTable:
    """All-pairs BFS distances and deterministic next hops.

    ``dist`` and ``next_hop`` are 0-based ``(n, n)`` arrays; ``next_hop``
    stores 1-based vertex labels.  Use :meth:`distance` for 1-based lookups.
    """

    graph: ArchitectureGraph
    dist: np.ndarray
    next_hop: np.ndarray

    @property
    def n(self) -> int:
        return self.graph.n

    def distance(self, u: int, v: int) -> int:
        return int(self.dist[u - 1, v - 1])


def all_pairs_distances(g: ArchitectureGraph) -> DistanceTable:
    """BFS from every vertex.

    ``next_hop[u][v]`` is the smallest-index neighbour of ``u`` that lies on
    a shortest ``u -> v`` path.
    """
    n = g.n
    adj = g.adjacency()
    dist = np.full((n, n), -1, dtype=np.int64)
    for s in range(1, n + 1):
        row = dist[s - 1]
        row[s - 1] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if row[w - 1] < 0:
                    row[w - 1] = row[v - 1] + 1
                    queue.append(w)
        if (row < 0).any():
            raise DisconnectedGraph(f"architecture {g.name or ''} is not connected".replace("  ", " "))
    hop = np.zeros((n, n), dtype=np.int64)
    for u in range(1, n + 1):
        hop[u - 1, u - 1] = u
        for v in range(1, n + 1):
            if u == v:
                continue
            target = dist[u - 1, v - 1] - 1
            hop[u - 1, v - 1] = next(w for w in adj[u] if dist[w - 1, v - 1] == target)
    return DistanceTable(g, dist, hop)


def shortest_path(t: DistanceTable, u: int, v: int) -> list[int]:
    if u == v:
        raise SameVertex(f"path endpoints coincide ({u})")
    path = [u]
    while path[-1] != v:
        path.append(int(t.next_hop[path[-1] - 1, v - 1]))
    return path
