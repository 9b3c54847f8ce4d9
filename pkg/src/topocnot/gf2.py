"""Linear algebra over GF(2) for CNOT circuits.

A CNOT circuit on ``n`` qubits is an invertible ``n x n`` matrix over GF(2):
``CNOT(c -> t)`` adds row ``c`` into row ``t``.  Matrices store each row as a
Python ``int`` whose bit ``k`` holds column ``k + 1``, so a row addition is a
single XOR.

All public indices (rows, columns, qubits) are 1-based.  Products of
elementary matrices are read with the rightmost factor acting first on a
state vector, so ``A = P . E1 . E2 ... Ek`` executes ``Ek`` first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, ParseError, SingularMatrix


class BitMatrix:
    """Immutable square matrix over GF(2) with bit-packed rows."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Iterable[int]):
        rows = tuple(int(r) for r in rows)
        if n < 1:
            raise DimensionMismatch(f"dimension must be positive, got {n}")
        if len(rows) != n:
            raise DimensionMismatch(f"expected {n} rows, got {len(rows)}")
        limit = 1 << n
        for r in rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row value {r} does not fit in {n} bits")
        self.n = n
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, (1 << k for k in range(n)))

    @classmethod
    def zeros(cls, n: int) -> BitMatrix:
        return cls(n, [0] * n)

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> BitMatrix:
        """Build from nested 0/1 lists (or a 2-D array), row by row."""
        n = len(data)
        rows = []
        for line in data:
            if len(line) != n:
                raise DimensionMismatch("matrix must be square")
            value = 0
            for k, bit in enumerate(line):
                bit = int(bit)
                if bit not in (0, 1):
                    raise ValueError(f"entry {bit!r} is not binary")
                value |= bit << k
            rows.append(value)
        return cls(n, rows)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> k) & 1 for k in range(self.n)] for r in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8)

    def entry(self, i: int, j: int) -> int:
        self._check_index(i)
        self._check_index(j)
        return (self.rows[i - 1] >> (j - 1)) & 1

    def row(self, i: int) -> int:
        self._check_index(i)
        return self.rows[i - 1]

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"index {i} outside 1..{self.n}")

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        body = "; ".join("".join(str(b) for b in line) for line in self.to_lists())
        return f"BitMatrix({self.n}, [{body}])"

    def transpose(self) -> BitMatrix:
        out = [0] * self.n
        for i, r in enumerate(self.rows):
            for k in range(self.n):
                if (r >> k) & 1:
                    out[k] |= 1 << i
        return BitMatrix(self.n, out)

    def rank(self) -> int:
        rows = list(self.rows)
        rank = 0
        for col in range(self.n):
            bit = 1 << col
            pivot = next((r for r in range(rank, self.n) if rows[r] & bit), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            for r in range(self.n):
                if r != rank and rows[r] & bit:
                    rows[r] ^= rows[rank]
            rank += 1
        return rank

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def inverse(self) -> BitMatrix:
        m = BitMatrix.identity(self.n)
        for op in gauss_jordan(self):
            m = apply_op(m, op)
        return m

    def is_identity(self) -> bool:
        return all(r == 1 << k for k, r in enumerate(self.rows))

    def weight(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"matrix {self.n}"]
        lines += [" ".join(str(b) for b in line) for line in self.to_lists()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> BitMatrix:
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines:
            raise ParseError("empty matrix text")
        head = lines[0].split()
        if len(head) != 2 or head[0] != "matrix" or not head[1].isdigit():
            raise ParseError(f"expected 'matrix <n>' header, got {lines[0]!r}")
        n = int(head[1])
        if n < 1:
            raise ParseError("matrix dimension must be positive")
        body = lines[1:]
        if len(body) != n:
            raise ParseError(f"expected {n} matrix rows, got {len(body)}")
        data = []
        for lineno, line in enumerate(body, start=2):
            tokens = line.split()
            if len(tokens) != n:
                raise ParseError(f"line {lineno}: expected {n} entries, got {len(tokens)}")
            if any(t not in ("0", "1") for t in tokens):
                raise ParseError(f"line {lineno}: non-binary token")
            data.append([int(t) for t in tokens])
        return cls.from_lists(data)


@dataclass(frozen=True)
class RowAdd:
    """Elementary row addition E(i+j): row ``j`` is added into row ``i``."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError(f"RowAdd needs distinct rows, got ({self.i}, {self.j})")

    def relabel(self, mapping) -> RowAdd:
        return RowAdd(mapping[self.i], mapping[self.j])

    def __str__(self) -> str:
        return f"add {self.i} {self.j}"


@dataclass(frozen=True)
class Swap:
    """Elementary row exchange E(i<->j)."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError(f"Swap needs distinct rows, got ({self.i}, {self.j})")

    def relabel(self, mapping) -> Swap:
        return Swap(mapping[self.i], mapping[self.j])

    def __str__(self) -> str:
        return f"swap {self.i} {self.j}"


ElementaryOp = Union[RowAdd, Swap]


@dataclass(frozen=True)
class CnotGate:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("CNOT control and target must differ")

    def as_op(self) -> RowAdd:
        return RowAdd(self.target, self.control)

    def __str__(self) -> str:
        return f"cnot {self.control} {self.target}"


@dataclass(frozen=True)
class Permutation:
    """Bijection on ``1..n``; ``image[v - 1]`` is the image of ``v``.

    Its matrix has a 1 at ``(v, image(v))`` for every ``v``, so multiplying a
    matrix on the left by it moves row ``image(v)`` to position ``v``.
    """

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        object.__setattr__(self, "image", image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise ValueError(f"not a permutation of 1..{len(image)}: {image}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        image = list(range(1, n + 1))
        image[i - 1], image[j - 1] = j, i
        return cls(tuple(image))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, v: int) -> int:
        return self.image[v - 1]

    def is_identity(self) -> bool:
        return all(x == k for k, x in enumerate(self.image, start=1))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for v, x in enumerate(self.image, start=1):
            inv[x - 1] = v
        return Permutation(tuple(inv))

    def then(self, other: Permutation) -> Permutation:
        """Map composition ``v -> other(self(v))``."""
        return Permutation(tuple(other(x) for x in self.image))

    def matrix(self) -> BitMatrix:
        return BitMatrix(self.n, (1 << (x - 1) for x in self.image))

    def as_mapping(self) -> dict[int, int]:
        return {v: x for v, x in enumerate(self.image, start=1)}

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.image)


def op_matrix(op: ElementaryOp, n: int) -> BitMatrix:
    """The elementary matrix of ``op`` in dimension ``n``."""
    return apply_op(BitMatrix.identity(n), op)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.n != b.n:
        raise DimensionMismatch(f"cannot multiply {a.n}x{a.n} by {b.n}x{b.n}")
    out = []
    brows = b.rows
    for r in a.rows:
        acc = 0
        k = 0
        while r:
            if r & 1:
                acc ^= brows[k]
            r >>= 1
            k += 1
        out.append(acc)
    return BitMatrix(a.n, out)


def product(ops: Sequence[ElementaryOp], n: int) -> BitMatrix:
    """Matrix product ``E1 . E2 ... Ek`` of ops written in product order."""
    m = BitMatrix.identity(n)
    for op in reversed(ops):
        m = apply_op(m, op)
    return m


def apply_op(m: BitMatrix, op: ElementaryOp) -> BitMatrix:
    """Return ``matrix(op) . m``."""
    n = m.n
    if not (1 <= op.i <= n and 1 <= op.j <= n):
        raise IndexOutOfRange(f"{op} outside dimension {n}")
    rows = list(m.rows)
    i, j = op.i - 1, op.j - 1
    if isinstance(op, RowAdd):
        rows[i] ^= rows[j]
    else:
        rows[i], rows[j] = rows[j], rows[i]
    return BitMatrix(n, rows)


def gauss_jordan(a: BitMatrix) -> list[ElementaryOp]:
    """Reduce ``a`` to the identity with elementary row operations.

    Columns are processed left to right.  A swap is emitted only when the
    diagonal entry is 0, exchanging with the smallest-index lower row that
    has a 1 there; then every other row with a 1 in the column is cleared,
    in ascending row order.  Applying the returned ops to ``a`` in list
    order yields the identity.
    """
    n = a.n
    rows = list(a.rows)
    ops: list[ElementaryOp] = []
    for col in range(n):
        bit = 1 << col
        if not rows[col] & bit:
            pivot = next((r for r in range(col + 1, n) if rows[r] & bit), None)
            if pivot is None:
                raise SingularMatrix(f"matrix is singular (no pivot in column {col + 1})")
            rows[col], rows[pivot] = rows[pivot], rows[col]
            ops.append(Swap(col + 1, pivot + 1))
        for r in range(n):
            if r != col and rows[r] & bit:
                rows[r] ^= rows[col]
                ops.append(RowAdd(r + 1, col + 1))
    return ops


def permutation_of(m: BitMatrix) -> Permutation | None:
    """The permutation whose matrix is ``m``, or ``None`` if ``m`` is not one."""
    image = []
    for r in m.rows:
        if r == 0 or r & (r - 1):
            return None
        image.append(r.bit_length())
    if len(set(image)) != m.n:
        return None
    return Permutation(tuple(image))


def circuit_matrix(gates: Iterable[CnotGate], n: int) -> BitMatrix:
    """Simulate ``gates`` in time order and return the overall linear map."""
    rows = [1 << k for k in range(n)]
    for g in gates:
        c, t = g.control, g.target
        if not (1 <= c <= n and 1 <= t <= n):
            raise IndexOutOfRange(f"{g} outside {n} qubits")
        rows[t - 1] ^= rows[c - 1]
    return BitMatrix(n, rows)


def random_invertible(n: int, rng: np.random.Generator) -> BitMatrix:
    """Uniformly random invertible matrix by rejection sampling."""
    while True:
        m = BitMatrix.from_lists(rng.integers(0, 2, size=(n, n)))
        if m.is_invertible():
            return m
