"""Alternative decompositions and candidate selection.

Gauss-Jordan elimination is simple but far from the shortest sequence on
dense matrices.  :func:`greedy_eliminate` reduces a matrix with row
additions that each lower ``sum_c log2(weight of column c)``, which is
much closer to optimal on structured inputs; working on the transpose
gives a second, different sequence.  :func:`decomposition_candidates`
collects several sequences for one matrix so the pipeline can keep the one
that routes best.
"""

from __future__ import annotations

import math
import random
from typing import Iterable, Sequence

from .gf2 import BitMatrix, CnotGate, ElementaryOp, RowAdd, Swap, gauss_jordan
from .rewrite import Decomposition, decompose, push_swaps_left, rewrite_optimize


def greedy_eliminate(a: BitMatrix, rng: random.Random | None = None) -> list[ElementaryOp]:
    """Row operations, in application order, that reduce ``a`` to the identity.

    Each step applies the row addition with the largest drop of
    ``sum_c log2(w_c)`` (``w_c`` = ones in column ``c``), ties broken by
    ``rng``.  Once every column has weight one the remaining permutation is
    cleared with swaps.  If no addition lowers the score, the rest is
    handed to Gauss-Jordan.
    """
    rng = rng or random.Random(0)
    n = a.n
    if not a.is_invertible():
        gauss_jordan(a)  # raises SingularMatrix
    log = [0.0] + [math.log2(w) for w in range(1, n + 2)]
    rows = list(a.rows)
    weight = [sum((r >> c) & 1 for r in rows) for c in range(n)]
    bits = [[c for c in range(n) if (r >> c) & 1] for r in rows]
    ops: list[ElementaryOp] = []

    while any(w != 1 for w in weight):
        best = -1e-12
        pool: list[tuple[int, int]] = []
        for j in range(n):
            bj = bits[j]
            for i in range(n):
                if i == j:
                    continue
                ri = rows[i]
                delta = 0.0
                for c in bj:
                    wc = weight[c]
                    delta += log[wc - 1] - log[wc] if (ri >> c) & 1 else log[wc + 1] - log[wc]
                if delta < best - 1e-9:
                    best, pool = delta, [(i, j)]
                elif delta <= best + 1e-9 and delta < -1e-12:
                    pool.append((i, j))
        if not pool:
            rest = gauss_jordan(BitMatrix(n, rows))
            return ops + rest
        i, j = rng.choice(pool)
        rows[i] ^= rows[j]
        ops.append(RowAdd(i + 1, j + 1))
        for c in bits[j]:
            weight[c] += 1 if (rows[i] >> c) & 1 else -1
        bits[i] = [c for c in range(n) if (rows[i] >> c) & 1]

    # rows now form a permutation matrix; sort it with swaps
    where = [r.bit_length() - 1 for r in rows]
    for v in range(n):
        while where[v] != v:
            w = where[v]
            ops.append(Swap(v + 1, w + 1))
            where[v], where[w] = where[w], where[v]
    return ops


def _transpose_op(op: ElementaryOp) -> ElementaryOp:
    return RowAdd(op.j, op.i) if isinstance(op, RowAdd) else op


def elimination_to_decomposition(
    ops: Sequence[ElementaryOp], n: int, transposed: bool = False, lookahead: int | None = 24
) -> Decomposition:
    """Turn an elimination of ``a`` (or of ``a.T``) into a rewritten decomposition.

    ``Om ... O1 . a = I`` gives ``a = O1 ... Om``; for the transpose,
    ``a = Om^T ... O1^T``.
    """
    seq = [_transpose_op(op) for op in reversed(ops)] if transposed else list(ops)
    normal = push_swaps_left(seq, n)
    return rewrite_optimize(normal.seq, n, normal.perm, lookahead=lookahead)


def circuit_decomposition(gates: Iterable[CnotGate], n: int, lookahead: int | None = 24) -> Decomposition:
    """The circuit's own gates as a decomposition (latest gate leftmost), rewritten."""
    seq = [g.as_op() for g in reversed(list(gates))]
    return rewrite_optimize(seq, n, lookahead=lookahead)


def decomposition_candidates(
    a: BitMatrix,
    gates: Sequence[CnotGate] | None = None,
    greedy_trials: int = 2,
    seed: int = 0,
    lookahead: int | None = 24,
) -> list[tuple[str, Decomposition]]:
    """Labelled candidate decompositions of ``a``.

    Always includes ``"gauss-jordan"``; adds ``greedy_trials`` seeded greedy
    runs on ``a`` and on its transpose, and ``"circuit"`` when the source
    gates are known.  Duplicates are dropped, order is deterministic.
    """
    out: list[tuple[str, Decomposition]] = [("gauss-jordan", decompose(a, lookahead=lookahead))]
    if gates is not None:
        out.append(("circuit", circuit_decomposition(gates, a.n, lookahead=lookahead)))
    if not a.is_identity():
        rng = random.Random(seed)
        at = a.transpose()
        for trial in range(greedy_trials):
            for label, m, flip in (("greedy", a, False), ("greedy-T", at, True)):
                ops = greedy_eliminate(m, rng)
                d = elimination_to_decomposition(ops, a.n, transposed=flip, lookahead=lookahead)
                out.append((f"{label}-{trial}", d))
    seen = set()
    unique = []
    for label, d in out:
        key = (d.perm, d.seq)
        if key not in seen:
            seen.add(key)
            unique.append((label, d))
    return unique
