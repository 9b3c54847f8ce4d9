"""Logical-to-physical qubit placement.

A decomposition's row additions define a weighted interaction graph over the
logical qubits.  Routing an addition between qubits placed at distance ``d``
costs :func:`cost_s` gates, so a placement is scored by

    sum over pairs {u, v} of weight(u, v) * cost_s(dist(x_u, x_v))

which is a quadratic assignment problem.  This module evaluates that score,
searches for good placements and exports the problem as a 0/1 linear
program for external MILP solvers.
"""

from __future__ import annotations

import itertools
import math
import random
import re
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .arch import DistanceTable
from .errors import (
    InstanceTooLarge,
    InvalidDistance,
    InvalidPlacement,
    ParseError,
    TooManyQubits,
)
from .gf2 import RowAdd
from .rewrite import Decomposition


def cost_s(d: int) -> int:
    """CNOT gates needed for one CNOT between qubits at distance ``d``."""
    if d < 1:
        raise InvalidDistance(f"distance must be at least 1, got {d}")
    return 1 if d == 1 else 4 * d - 4


@dataclass(frozen=True)
class InteractionGraph:
    """Multigraph of row additions; ``weights[(u, v)]`` with ``u < v``."""

    n: int
    weights: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (u, v), w in self.weights.items():
            if u == v:
                raise ValueError(f"self-pair ({u}, {v}) in interaction graph")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"pair ({u}, {v}) outside 1..{self.n}")
            if w <= 0:
                raise ValueError(f"weight of ({u}, {v}) must be positive")
            key = (min(u, v), max(u, v))
            clean[key] = clean.get(key, 0) + int(w)
        object.__setattr__(self, "weights", dict(sorted(clean.items())))

    @property
    def total_weight(self) -> int:
        return sum(self.weights.values())

    def neighbor_lists(self) -> list[list[tuple[int, int]]]:
        """``out[v]`` lists ``(u, weight)`` for every partner of ``v``; 1-based."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.n + 1)]
        for (u, v), w in self.weights.items():
            out[u].append((v, w))
            out[v].append((u, w))
        return out


def interaction_graph(d: Decomposition | Iterable[RowAdd], n: int | None = None) -> InteractionGraph:
    if isinstance(d, Decomposition):
        seq, n = d.seq, d.n
    else:
        seq = list(d)
        if n is None:
            raise ValueError("n is required when passing a bare sequence")
    counts = Counter((min(op.i, op.j), max(op.i, op.j)) for op in seq)
    return InteractionGraph(n, dict(counts))


@dataclass(frozen=True)
class Placement:
    """``assign[v - 1]`` is the physical vertex holding logical qubit ``v``."""

    assign: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assign", tuple(int(p) for p in self.assign))

    @classmethod
    def identity(cls, n: int) -> Placement:
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.assign)

    def __call__(self, v: int) -> int:
        return self.assign[v - 1]

    def validate(self, n_physical: int) -> None:
        if len(set(self.assign)) != len(self.assign):
            raise InvalidPlacement(f"placement is not injective: {self.assign}")
        bad = [p for p in self.assign if not 1 <= p <= n_physical]
        if bad:
            raise InvalidPlacement(f"physical vertices {bad} outside 1..{n_physical}")

    def to_text(self) -> str:
        return "".join(f"assign {v} {p}\n" for v, p in enumerate(self.assign, start=1))


def cost_matrix(t: DistanceTable) -> list[list[int]]:
    """``cost_s`` of every physical pair (0-based; diagonal 0)."""
    n = t.n
    dist = t.dist.tolist()
    return [[0 if p == q else cost_s(dist[p][q]) for q in range(n)] for p in range(n)]


def objective(p: Placement, ig: InteractionGraph, t: DistanceTable) -> int:
    if p.n != ig.n:
        raise InvalidPlacement(f"placement covers {p.n} qubits, interaction graph has {ig.n}")
    p.validate(t.n)
    total = 0
    for (u, v), w in ig.weights.items():
        total += w * cost_s(t.distance(p(u), p(v)))
    return total


def _check_size(ig: InteractionGraph, t: DistanceTable) -> None:
    if ig.n > t.n:
        raise TooManyQubits(f"{ig.n} logical qubits do not fit on {t.n} physical vertices")


class _SlotState:
    """Mutable slot occupancy used by the local search (0-based throughout)."""

    def __init__(self, ig: InteractionGraph, cost: list[list[int]], assign: list[int], n_phys: int):
        self.cost = cost
        self.nbrs = [[(u - 1, w) for u, w in lst] for lst in ig.neighbor_lists()[1:]]
        self.pos = list(assign)
        self.slot = [-1] * n_phys
        for v, p in enumerate(assign):
            self.slot[p] = v

    def total(self) -> int:
        pos, cost = self.pos, self.cost
        s = 0
        for v, lst in enumerate(self.nbrs):
            for u, w in lst:
                if u > v:
                    s += w * cost[pos[v]][pos[u]]
        return s

    def local_cost(self, moved: list[int], where: dict[int, int]) -> int:
        """Cost of all pairs touching ``moved`` when they sit at ``where``."""
        pos, cost, nbrs = self.pos, self.cost, self.nbrs
        s = 0
        for v in moved:
            pv = where[v]
            crow = cost[pv]
            for u, w in nbrs[v]:
                pu = where.get(u)
                if pu is None:
                    s += w * crow[pos[u]]
                elif u > v:
                    s += w * crow[pu]
        return s

    def sweep(self, k: int, current: int) -> int:
        """One pass over all size-``k`` slot subsets; returns the new objective."""
        slot = self.slot
        for subset in itertools.combinations(range(len(slot)), k):
            occupants = [slot[p] for p in subset]
            moved = [v for v in occupants if v >= 0]
            if not moved or all(not self.nbrs[v] for v in moved):
                continue
            old_where = {v: self.pos[v] for v in moved}
            old = self.local_cost(moved, old_where)
            seen = {tuple(occupants)}
            for arrangement in itertools.permutations(occupants):
                if arrangement in seen:
                    continue
                seen.add(arrangement)
                where = {v: p for v, p in zip(arrangement, subset) if v >= 0}
                delta = self.local_cost(moved, where) - old
                if delta < 0:
                    for v, p in zip(arrangement, subset):
                        slot[p] = v
                        if v >= 0:
                            self.pos[v] = p
                    current += delta
                    occupants = list(arrangement)
                    old = old + delta
                    old_where = where
        return current


def local_search_place(
    ig: InteractionGraph,
    t: DistanceTable,
    k: int = 2,
    seed: int = 0,
    max_rounds: int | None = None,
    restarts: int = 0,
    polish_k: int | None = 3,
    warm_start: Placement | None = None,
    time_limit: float | None = None,
) -> Placement:
    """Improve a placement by permuting the contents of ``k`` slots at a time.

    Every subset of ``k`` physical slots (empty slots included) is tried with
    every rearrangement, and any strictly better arrangement is kept at once.
    Sweeps repeat until one finds nothing; then a single ``polish_k`` sweep
    runs, and the whole cycle repeats while it helps.  ``restarts`` extra runs
    start from seeded random placements; the best result wins (ties go to the
    earliest run).  With ``time_limit`` (seconds), no new restart begins once
    the limit has passed; the first run always completes.
    """
    _check_size(ig, t)
    if k < 2:
        raise ValueError("k must be at least 2")
    n_phys = t.n
    if warm_start is not None:
        if warm_start.n != ig.n:
            raise InvalidPlacement("warm start size does not match the interaction graph")
        warm_start.validate(n_phys)
        start = [p - 1 for p in warm_start.assign]
    else:
        start = list(range(ig.n))
    if not ig.weights:
        return Placement(tuple(p + 1 for p in start))

    cost = cost_matrix(t)
    rng = random.Random(seed)
    k = min(k, n_phys)
    polish = polish_k if polish_k is not None and k < polish_k <= n_phys else None

    best_assign, best_value = None, math.inf
    started = time.perf_counter()
    for run in range(restarts + 1):
        if run and time_limit is not None and time.perf_counter() - started > time_limit:
            break
        if run == 0:
            assign = start
        else:
            assign = rng.sample(range(n_phys), ig.n)
        state = _SlotState(ig, cost, assign, n_phys)
        value = state.total()
        rounds = 0
        while max_rounds is None or rounds < max_rounds:
            rounds += 1
            new = state.sweep(k, value)
            if new < value:
                value = new
                continue
            if polish is None:
                break
            new = state.sweep(polish, value)
            if new >= value:
                break
            value = new
        if value < best_value:
            best_value, best_assign = value, list(state.pos)
    return Placement(tuple(p + 1 for p in best_assign))


def exhaustive_place(
    ig: InteractionGraph, t: DistanceTable, bound: int = 10**7
) -> tuple[Placement, int]:
    """Globally optimal placement by branch and bound.

    Logical qubits are assigned in order to physical vertices in increasing
    order, so the first minimiser found is the lexicographically smallest.
    Raises ``InstanceTooLarge`` when ``n!/(n-m)!`` exceeds ``bound``.
    """
    _check_size(ig, t)
    m, n = ig.n, t.n
    if math.perm(n, m) > bound:
        raise InstanceTooLarge(f"{math.perm(n, m)} placements exceed the bound {bound}")
    cost = cost_matrix(t)
    # Edges to earlier-assigned logical qubits, per logical qubit (0-based).
    back: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    for (u, v), w in ig.weights.items():
        back[v - 1].append((u - 1, w))

    best_value = math.inf
    best: list[int] | None = None
    pos = [0] * m
    used = [False] * n

    def dfs(v: int, partial: int) -> None:
        nonlocal best_value, best
        if v == m:
            best_value, best = partial, pos[:]
            return
        edges = back[v]
        for p in range(n):
            if used[p]:
                continue
            crow = cost[p]
            extra = partial
            for u, w in edges:
                extra += w * crow[pos[u]]
            if extra >= best_value:
                continue
            used[p] = True
            pos[v] = p
            dfs(v + 1, extra)
            used[p] = False

    dfs(0, 0)
    return Placement(tuple(p + 1 for p in best)), int(best_value)


# -- MILP export ---------------------------------------------------------------


@dataclass
class MilpModel:
    """0/1 program whose optimum equals the minimum placement objective.

    ``y[(v, p)]`` puts logical ``v`` on physical ``p``; ``z[(u, v, p, q)]``
    is forced to 1 when ``u`` sits on ``p`` and ``v`` on ``q``.
    """

    y: dict[tuple[int, int], str]
    z: dict[tuple[int, int, int, int], str]
    objective: dict[str, int]
    constraints: list[tuple[str, dict[str, int], str, int]]

    @property
    def variables(self) -> list[str]:
        return list(self.y.values()) + list(self.z.values())

    def to_lp(self) -> str:
        out = ["\\ qubit placement model", "Minimize"]
        terms = list(self.objective.items())
        if not terms and self.y:
            terms = [(next(iter(self.y.values())), 0)]
        out += _wrap(" obj:", _linear(terms))
        out.append("Subject To")
        for name, coeffs, sense, rhs in self.constraints:
            out += _wrap(f" {name}:", _linear(list(coeffs.items())) + [sense, str(rhs)])
        out.append("Binary")
        out += _wrap("", self.variables)
        out.append("End")
        return "\n".join(out) + "\n"


def _linear(terms: list[tuple[str, int]]) -> list[str]:
    tokens = []
    for idx, (name, coef) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = name if mag == 1 else f"{mag} {name}"
        if idx == 0:
            tokens.append(f"- {body}" if sign == "-" else body)
        else:
            tokens.append(f"{sign} {body}")
    return tokens


def _wrap(prefix: str, tokens: list[str], width: int = 200) -> list[str]:
    lines, cur = [], prefix
    for tok in tokens:
        if len(cur) + len(tok) + 1 > width and cur.strip():
            lines.append(cur)
            cur = "   "
        cur = f"{cur} {tok}"
    lines.append(cur)
    return lines


def export_milp(ig: InteractionGraph, t: DistanceTable) -> tuple[MilpModel, str]:
    """Assignment-variable linearisation of the placement objective.

    ``sum_p y[v,p] = 1`` per logical qubit, ``sum_v y[v,p] <= 1`` per vertex,
    ``z[e,p,q] >= y[u,p] + y[v,q] - 1`` per pair and ordered ``p != q``, and
    the objective ``sum weight(e) * cost_s(dist(p, q)) * z[e,p,q]``.
    """
    _check_size(ig, t)
    m, n = ig.n, t.n
    y = {(v, p): f"y_{v}_{p}" for v in range(1, m + 1) for p in range(1, n + 1)}
    z: dict[tuple[int, int, int, int], str] = {}
    obj: dict[str, int] = {}
    cons: list[tuple[str, dict[str, int], str, int]] = []
    for v in range(1, m + 1):
        cons.append((f"place_{v}", {y[v, p]: 1 for p in range(1, n + 1)}, "=", 1))
    for p in range(1, n + 1):
        cons.append((f"slot_{p}", {y[v, p]: 1 for v in range(1, m + 1)}, "<=", 1))
    for (u, v), w in ig.weights.items():
        for p in range(1, n + 1):
            for q in range(1, n + 1):
                if p == q:
                    continue
                name = f"z_{u}_{v}_{p}_{q}"
                z[u, v, p, q] = name
                obj[name] = w * cost_s(t.distance(p, q))
                cons.append((f"link_{u}_{v}_{p}_{q}", {name: 1, y[u, p]: -1, y[v, q]: -1}, ">=", -1))
    model = MilpModel(y, z, obj, cons)
    return model, model.to_lp()


_ASSIGN = re.compile(r"^assign\s+(\d+)\s+(\d+)$")
_YVAR = re.compile(r"^(?:\d+\s+)?y_(\d+)_(\d+)\s*=?\s*([-+]?[0-9.]+(?:[eE][-+]?\d+)?)")


def import_solution(text: str, ig: InteractionGraph, t: DistanceTable) -> Placement:
    """Read ``assign <v> <p>`` lines or solver ``y_<v>_<p> <value>`` listings."""
    found: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _ASSIGN.match(line)
        if m:
            v, p = int(m.group(1)), int(m.group(2))
        else:
            m = _YVAR.match(line)
            if not m:
                continue
            if float(m.group(3)) <= 0.5:
                continue
            v, p = int(m.group(1)), int(m.group(2))
        if not 1 <= v <= ig.n:
            raise ParseError(f"line {lineno}: logical qubit {v} outside 1..{ig.n}")
        if v in found and found[v] != p:
            raise InvalidPlacement(f"line {lineno}: logical qubit {v} assigned twice")
        found[v] = p
    missing = [v for v in range(1, ig.n + 1) if v not in found]
    if missing:
        raise ParseError(f"no assignment for logical qubits {missing}")
    placement = Placement(tuple(found[v] for v in range(1, ig.n + 1)))
    placement.validate(t.n)
    return placement
