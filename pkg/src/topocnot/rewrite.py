"""Decompose a matrix into ``P . E1 ... Ek`` and shorten the row additions.

Sequences are kept in product order: the leftmost factor acts last.  The
rewrite system consists of the seven GF(2) identities below (``R1``-``R7``)
plus the involution ``E(i+j) E(i+j) = I``.  Each identity is checked against
brute-force matrix products when the module is imported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DimensionMismatch, ParseError
from .gf2 import (
    BitMatrix,
    ElementaryOp,
    Permutation,
    RowAdd,
    Swap,
    gauss_jordan,
    mat_mul,
    product,
)


@dataclass(frozen=True)
class Decomposition:
    """``matrix(perm) . product(seq)``, with ``seq`` made of row additions only."""

    perm: Permutation
    seq: tuple[RowAdd, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(self.seq))
        for op in self.seq:
            if not isinstance(op, RowAdd):
                raise TypeError(f"decomposition sequence must be swap-free, got {op}")

    @property
    def n(self) -> int:
        return self.perm.n

    def matrix(self) -> BitMatrix:
        return mat_mul(self.perm.matrix(), product(self.seq, self.n))

    def __len__(self) -> int:
        return len(self.seq)

    def to_text(self) -> str:
        lines = [f"perm {self.perm}"] + [str(op) for op in self.seq]
        return "\n".join(lines) + "\n"


# Rules as (lhs, rhs) over symbolic (target, source) pairs; "swap" in the rhs
# marks the E(i<->j) factor of R7.
RULES: dict[str, tuple[tuple, tuple]] = {
    "R1": ((("k", "i"), ("k", "j"), ("i", "j")), (("i", "j"), ("k", "i"))),
    "R2": ((("i", "k"), ("k", "j"), ("i", "j")), (("k", "j"), ("i", "k"))),
    "R3": ((("i", "k"), ("j", "k"), ("i", "j")), (("i", "j"), ("j", "k"))),
    "R4": ((("j", "k"), ("i", "k"), ("i", "j")), (("i", "j"), ("j", "k"))),
    "R5": ((("k", "j"), ("k", "i"), ("i", "j")), (("i", "j"), ("k", "i"))),
    "R6": ((("k", "j"), ("i", "k"), ("i", "j")), (("i", "k"), ("k", "j"))),
    "R7": ((("j", "i"), ("i", "j")), ("swap", ("j", "i"))),
    "cancel": ((("i", "j"), ("i", "j")), ()),
}

_PAIR_RULES = [(name, lhs, rhs) for name, (lhs, rhs) in RULES.items() if len(lhs) == 2]
_TRIPLE_RULES = [(name, lhs, rhs) for name, (lhs, rhs) in RULES.items() if len(lhs) == 3]


def rule_sides(name: str, i: int, j: int, k: int) -> tuple[list[ElementaryOp], list[ElementaryOp]]:
    """Concrete left- and right-hand sides of a rule for indices ``i, j, k``."""
    lhs, rhs = RULES[name]
    env = {"i": i, "j": j, "k": k}

    def build(pattern):
        if pattern == "swap":
            return Swap(i, j)
        return RowAdd(env[pattern[0]], env[pattern[1]])

    return [build(p) for p in lhs], [build(p) for p in rhs]


def check_rules(n: int) -> list[tuple[str, int, int, int]]:
    """Return every (rule, i, j, k) in dimension ``n`` whose sides differ."""
    failures = []
    for name in RULES:
        for i, j, k in itertools.permutations(range(1, n + 1), 3):
            lhs, rhs = rule_sides(name, i, j, k)
            if product(lhs, n) != product(rhs, n):
                failures.append((name, i, j, k))
    return failures


if check_rules(3):  # pragma: no cover - guards the product convention
    raise ImportError("rewrite rules do not hold under the product convention")


def commute(a: RowAdd, b: RowAdd) -> bool:
    """Whether ``E(a) E(b) == E(b) E(a)``."""
    return a.i != b.j and b.i != a.j


def _match(pattern, ops) -> dict[str, int] | None:
    env: dict[str, int] = {}
    for (t, s), op in zip(pattern, ops):
        for sym, val in ((t, op.i), (s, op.j)):
            bound = env.get(sym)
            if bound is None:
                if val in env.values():
                    return None
                env[sym] = val
            elif bound != val:
                return None
    return env


def _instantiate(rhs, env) -> tuple[Swap | None, list[RowAdd]]:
    swap = None
    out = []
    for p in rhs:
        if p == "swap":
            swap = Swap(env["i"], env["j"])
        else:
            out.append(RowAdd(env[p[0]], env[p[1]]))
    return swap, out


def _conjugate_prefix(seq: list[RowAdd], upto: int, i: int, j: int) -> None:
    mapping = {i: j, j: i}
    for t in range(upto):
        op = seq[t]
        if op.i in mapping or op.j in mapping:
            seq[t] = RowAdd(mapping.get(op.i, op.i), mapping.get(op.j, op.j))


def _find_rewrite(seq: list[RowAdd], lookahead: int | None):
    """First applicable rewrite as ``(positions, rhs, swap)`` or ``None``.

    Windows start at ``p``; later ops may be pulled left next to it when they
    commute with everything they pass over.
    """
    size = len(seq)
    for p in range(size):
        a = seq[p]
        a_idx = (a.i, a.j)
        stop_q = size if lookahead is None else min(size, p + 1 + lookahead)
        tgt1: set[int] = set()
        src1: set[int] = set()
        for q in range(p + 1, stop_q):
            b = seq[q]
            movable_b = b.i not in src1 and b.j not in tgt1
            if movable_b and (b.i in a_idx or b.j in a_idx):
                for name, lhs, rhs in _PAIR_RULES:
                    env = _match(lhs, (a, b))
                    if env is not None:
                        swap, new = _instantiate(rhs, env)
                        return (p, q), new, swap
                tgt2: set[int] = set()
                src2: set[int] = set()
                syms = {a.i, a.j, b.i, b.j}
                if len(syms) == 3:
                    stop_r = size if lookahead is None else min(size, q + 1 + lookahead)
                    for r in range(q + 1, stop_r):
                        c = seq[r]
                        if (
                            c.i in syms
                            and c.j in syms
                            and c.i not in src1
                            and c.j not in tgt1
                            and c.i not in src2
                            and c.j not in tgt2
                        ):
                            for name, lhs, rhs in _TRIPLE_RULES:
                                env = _match(lhs, (a, b, c))
                                if env is not None:
                                    swap, new = _instantiate(rhs, env)
                                    return (p, q, r), new, swap
                        tgt2.add(c.i)
                        src2.add(c.j)
            tgt1.add(b.i)
            src1.add(b.j)
    return None


def push_swaps_left(seq: Sequence[ElementaryOp], n: int) -> Decomposition:
    """Rewrite a mixed sequence as ``matrix(perm) . (swap-free sequence)``.

    Uses ``Swap(i,j) . RowAdd(a,b) = RowAdd(t(a), t(b)) . Swap(i,j)`` where
    ``t`` exchanges ``i`` and ``j``.
    """
    # Invariant: prefix product == matrix(sigma) . product(body) after the
    # final relabel; body ops are stored relative to the running sigma.
    sigma = Permutation.identity(n)
    body: list[RowAdd] = []
    for op in seq:
        if isinstance(op, Swap):
            sigma = sigma.then(Permutation.transposition(n, op.i, op.j))
        else:
            inv = sigma.inverse()
            body.append(RowAdd(inv(op.i), inv(op.j)))
    final = [RowAdd(sigma(op.i), sigma(op.j)) for op in body]
    return Decomposition(sigma, tuple(final))


def rewrite_optimize(
    seq: Sequence[RowAdd],
    n: int,
    perm: Permutation | None = None,
    lookahead: int | None = 24,
) -> Decomposition:
    """Shorten ``matrix(perm) . product(seq)`` with the rewrite rules.

    Scans windows leftmost-first, applies the first match and rescans until no
    rule fires.  ``lookahead`` bounds how far a partner op may be pulled left;
    ``None`` removes the bound.
    """
    perm = perm if perm is not None else Permutation.identity(n)
    work = list(seq)
    for op in work:
        if not isinstance(op, RowAdd):
            raise TypeError("rewrite_optimize expects a swap-free sequence")
    while True:
        found = _find_rewrite(work, lookahead)
        if found is None:
            break
        positions, new_ops, swap = found
        p = positions[0]
        for pos in reversed(positions[1:]):
            del work[pos]
        work[p : p + 1] = new_ops
        if swap is not None:
            _conjugate_prefix(work, p, swap.i, swap.j)
            perm = perm.then(Permutation.transposition(n, swap.i, swap.j))
    return Decomposition(perm, tuple(work))


def decompose(a: BitMatrix, lookahead: int | None = 24) -> Decomposition:
    """Gauss-Jordan, normalise swaps into the permutation, then rewrite.

    Gauss-Jordan gives ``Om ... O1 . a = I``; every op is self-inverse, so the
    list ``[O1, ..., Om]`` is already ``a`` written in product order.
    """
    ops = gauss_jordan(a)
    normal = push_swaps_left(ops, a.n)
    return rewrite_optimize(normal.seq, a.n, normal.perm, lookahead=lookahead)


def verify_decomposition(a: BitMatrix, d: Decomposition) -> bool:
    if a.n != d.n:
        raise DimensionMismatch(f"matrix is {a.n}x{a.n} but decomposition has n={d.n}")
    return d.matrix() == a


def parse_sequence(text: str) -> tuple[Permutation | None, list[ElementaryOp]]:
    """Parse the ``perm`` / ``add`` / ``swap`` line format."""
    perm = None
    ops: list[ElementaryOp] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            values = [int(x) for x in rest]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer argument") from None
        if head == "perm":
            if perm is not None or ops:
                raise ParseError(f"line {lineno}: 'perm' must come first and only once")
            try:
                perm = Permutation(tuple(values))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
        elif head in ("add", "swap"):
            if len(values) != 2 or values[0] == values[1]:
                raise ParseError(f"line {lineno}: expected two distinct indices")
            ops.append(RowAdd(*values) if head == "add" else Swap(*values))
        else:
            raise ParseError(f"line {lineno}: unknown directive {head!r}")
    return perm, ops
